#include "grqopt/io.hpp"

#include <charconv>
#include <fstream>

#include "json.hpp"

namespace grqopt {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

using nlohmann::json;

void append_values(std::string& s, const double* data, Index n) {
    s += '[';
    for (Index k = 0; k < n; ++k) {
        if (k != 0) s += ',';
        s += format_double(data[k]);
    }
    s += ']';
}

// Row-major, matching the file layout; Eigen stores column-major.
void append_matrix(std::string& s, const Matrix& m) {
    s += '[';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (i != 0 || j != 0) s += ',';
            s += format_double(m(i, j));
        }
    }
    s += ']';
}

Matrix parse_matrix(const json& arr, Index q, const char* name) {
    if (!arr.is_array() || static_cast<Index>(arr.size()) != q * q) {
        throw Error(std::string("parse: field ") + name + " must hold q*q numbers");
    }
    Matrix m(q, q);
    std::size_t k = 0;
    for (Index i = 0; i < q; ++i) {
        for (Index j = 0; j < q; ++j) m(i, j) = arr.at(k++).get<double>();
    }
    return m;
}

Vector parse_vector(const json& arr, Index q, const char* name) {
    if (!arr.is_array() || static_cast<Index>(arr.size()) != q) {
        throw Error(std::string("parse: field ") + name + " must hold q numbers");
    }
    Vector v(q);
    for (Index i = 0; i < q; ++i) v(i) = arr.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw IoError("parse " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace

ProblemInstance load_instance(const std::string& path) {
    const json j = read_json_file(path);
    const Index q = j.at("q").get<Index>();
    return ProblemInstance(parse_matrix(j.at("B"), q, "B"), parse_matrix(j.at("D"), q, "D"),
                           parse_matrix(j.at("W"), q, "W"));
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
    std::string s = "{\"q\":" + std::to_string(inst.dim());
    s += ",\"B\":";
    append_matrix(s, inst.b());
    s += ",\"D\":";
    append_matrix(s, inst.d());
    s += ",\"W\":";
    append_matrix(s, inst.w());
    s += "}\n";
    write_text_file(path, s);
}

GtlsSources load_gtls_sources(const std::string& path) {
    const json j = read_json_file(path);
    const Index q = j.at("q").get<Index>();
    return GtlsSources{parse_matrix(j.at("Omega1"), q, "Omega1"),
                       parse_matrix(j.at("Omega2"), q, "Omega2"),
                       parse_matrix(j.at("Sigma1"), q, "Sigma1"),
                       parse_matrix(j.at("Sigma2"), q, "Sigma2")};
}

void save_gtls_sources(const GtlsSources& s, const std::string& path) {
    std::string text = "{\"q\":" + std::to_string(s.omega1.rows());
    text += ",\"Omega1\":";
    append_matrix(text, s.omega1);
    text += ",\"Omega2\":";
    append_matrix(text, s.omega2);
    text += ",\"Sigma1\":";
    append_matrix(text, s.sigma1);
    text += ",\"Sigma2\":";
    append_matrix(text, s.sigma2);
    text += "}\n";
    write_text_file(path, text);
}

std::string manifest_line(const GenConfig& cfg) {
    std::string s = "{\"format_version\":1";
    s += ",\"q\":" + std::to_string(cfg.q);
    s += ",\"seed\":" + std::to_string(cfg.seed);
    s += ",\"dof\":" + format_double(cfg.dof);
    s += ",\"generator_settings\":{\"count\":" + std::to_string(cfg.count);
    s += ",\"multistart_count\":" + std::to_string(cfg.multistart_count);
    s += ",\"cluster_tol\":" + format_double(cfg.cluster_tol);
    s += "}}";
    return s;
}

std::string record_line(const DatasetRecord& rec) {
    std::string s = "{\"id\":" + std::to_string(rec.id);
    s += ",\"seed\":" + std::to_string(rec.seed);
    s += ",\"q\":" + std::to_string(rec.instance.dim());
    s += ",\"B\":";
    append_matrix(s, rec.instance.b());
    s += ",\"D\":";
    append_matrix(s, rec.instance.d());
    s += ",\"W\":";
    append_matrix(s, rec.instance.w());
    s += ",\"nontrivial\":";
    s += rec.nontrivial ? "true" : "false";
    s += ",\"f_global\":" + format_double(rec.f_global);
    s += ",\"x_global\":";
    append_values(s, rec.x_global.data(), rec.x_global.size());
    if (rec.f_local_best) s += ",\"f_local_best\":" + format_double(*rec.f_local_best);
    s += ",\"distinct_basins\":" + std::to_string(rec.distinct_basins);
    s += '}';
    return s;
}

std::pair<DatasetManifest, std::vector<DatasetRecord>> load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_dataset: cannot open " + path);

    DatasetManifest man;
    std::vector<DatasetRecord> recs;
    bool have_manifest = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw IoError("load_dataset: " + path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!have_manifest) {
            if (!j.contains("format_version")) {
                throw IoError("load_dataset: " + path + " must start with a manifest line");
            }
            man.format_version = j.at("format_version").get<int>();
            man.q = j.at("q").get<Index>();
            man.seed = j.at("seed").get<std::uint64_t>();
            man.dof = j.at("dof").get<double>();
            const json& gs = j.at("generator_settings");
            man.count = gs.at("count").get<int>();
            man.multistart_count = gs.at("multistart_count").get<int>();
            man.cluster_tol = gs.at("cluster_tol").get<double>();
            have_manifest = true;
            continue;
        }
        const Index q = j.at("q").get<Index>();
        recs.push_back(DatasetRecord{
            j.at("id").get<std::int64_t>(),
            j.at("seed").get<std::uint64_t>(),
            ProblemInstance(parse_matrix(j.at("B"), q, "B"), parse_matrix(j.at("D"), q, "D"),
                            parse_matrix(j.at("W"), q, "W")),
            j.at("nontrivial").get<bool>(),
            j.at("f_global").get<double>(),
            parse_vector(j.at("x_global"), q, "x_global"),
            j.contains("f_local_best") ? std::optional<double>(j.at("f_local_best").get<double>())
                                       : std::nullopt,
            j.at("distinct_basins").get<int>(),
        });
    }
    if (!have_manifest) throw IoError("load_dataset: " + path + " has no manifest line");
    return {man, std::move(recs)};
}

}  // namespace grqopt
