#pragma once

// JSON forms of group descriptors, classification reports and certificates,
// and the document envelope written by the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "normtori/catalog.hpp"
#include "normtori/rational.hpp"

namespace normtori {

inline constexpr const char* tool_version = "0.1.0";

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Integers and matrices: numbers when they fit in 64 bits, decimal strings otherwise.

inline json to_json(const Integer& v) {
    if (v.fits_int64()) return v.to_int64();
    return v.to_string();
}

inline Integer integer_from_json(const json& j) {
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw InvalidInput(e.what());
        }
    }
    throw InvalidInput("expected an integer, got " + j.dump());
}

inline json to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(i, c)));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline IntMatrix matrix_from_json(const json& j) {
    auto r = j.at("rows").get<std::size_t>(), c = j.at("cols").get<std::size_t>();
    const auto& e = j.at("entries");
    if (e.size() != r) throw InvalidInput("matrix: expected " + std::to_string(r) + " rows");
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (e[i].size() != c) throw InvalidInput("matrix: row " + std::to_string(i) + " has wrong length");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = integer_from_json(e[i][k]);
    }
    return m;
}

/// Generators are written as 1-based image lists.
inline json to_json(const Perm& p) { return p.images_1based(); }

inline Perm perm_from_json(const json& j, std::size_t degree) {
    if (j.is_string()) return Perm::from_cycles(degree, j.get<std::string>());
    if (!j.is_array()) throw InvalidInput("generator must be an image list or a cycle string");
    auto images = j.get<std::vector<std::int64_t>>();
    if (images.size() != degree)
        throw InvalidInput("generator has " + std::to_string(images.size()) + " images, expected " + std::to_string(degree));
    return Perm::from_images_1based(images);
}

inline json perms_to_json(const std::vector<Perm>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(to_json(p));
    return a;
}

inline std::vector<Perm> perms_from_json(const json& j, std::size_t degree) {
    std::vector<Perm> out;
    for (const auto& x : j) out.push_back(perm_from_json(x, degree));
    return out;
}

// ---------------------------------------------------------------------------
// Group descriptors

struct GroupDescriptor {
    std::optional<std::string> label;  // catalog label or family expression
    std::size_t degree = 0;
    std::vector<Perm> generators;
    std::size_t stabilizer_point = 1;  // 1-based
    std::optional<std::string> display_name;

    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;

    /// Resolves to a transitive group of the stated degree.
    [[nodiscard]] PermGroup resolve() const {
        PermGroup g = label ? catalog::lookup(*label) : PermGroup(degree, generators);
        if (degree != 0 && g.degree() != degree)
            throw InvalidInput("group has degree " + std::to_string(g.degree()) + ", descriptor says " + std::to_string(degree));
        if (!g.is_transitive()) throw InvalidInput("group is not transitive");
        if (stabilizer_point < 1 || stabilizer_point > g.degree())
            throw InvalidInput("stabilizer point " + std::to_string(stabilizer_point) + " outside 1.." + std::to_string(g.degree()));
        return g;
    }

    [[nodiscard]] std::string name() const {
        if (display_name) return *display_name;
        return label ? *label : "custom group of degree " + std::to_string(degree);
    }
};

inline GroupDescriptor descriptor_from_label(const std::string& label, std::size_t stabilizer_point = 1) {
    GroupDescriptor d;
    d.label = label;
    d.degree = catalog::lookup(label).degree();
    d.stabilizer_point = stabilizer_point;
    return d;
}

inline json to_json(const GroupDescriptor& d) {
    json j;
    if (d.label) j["label"] = *d.label;
    j["degree"] = d.degree;
    if (!d.label) j["generators"] = perms_to_json(d.generators);
    j["stabilizer_point"] = d.stabilizer_point;
    if (d.display_name) j["name"] = *d.display_name;
    return j;
}

/// Accepts {"label": ...} or {"degree": n, "generators": [...]}, each with an
/// optional "stabilizer_point"; cycle strings are normalized to image lists.
inline GroupDescriptor descriptor_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("group descriptor must be a JSON object");
    GroupDescriptor d;
    d.stabilizer_point = j.value("stabilizer_point", std::size_t{1});
    if (j.contains("name")) d.display_name = j.at("name").get<std::string>();
    if (j.contains("label")) {
        d.label = j.at("label").get<std::string>();
        d.degree = catalog::lookup(*d.label).degree();
        if (j.contains("degree") && j.at("degree").get<std::size_t>() != d.degree)
            throw InvalidInput("label " + *d.label + " has degree " + std::to_string(d.degree));
        return d;
    }
    if (!j.contains("degree") || !j.contains("generators"))
        throw InvalidInput("group descriptor needs \"label\" or both \"degree\" and \"generators\"");
    d.degree = j.at("degree").get<std::size_t>();
    if (d.degree == 0) throw InvalidInput("degree must be positive");
    d.generators = perms_from_json(j.at("generators"), d.degree);
    return d;
}

// ---------------------------------------------------------------------------
// Verdicts and reports

inline json to_json(const IsoCertificate& c) {
    json cg = json::array(), fg = json::array();
    for (const auto& gens : c.class_generators) cg.push_back(perms_to_json(gens));
    for (const auto& m : c.f_generators) fg.push_back(to_json(m));
    return json{{"degree", c.degree},
                {"group_generators", perms_to_json(c.group_generators)},
                {"class_generators", std::move(cg)},
                {"class_labels", c.class_labels},
                {"class_orders", c.class_orders},
                {"f_generators", std::move(fg)},
                {"vector", c.vector},
                {"lhs", c.lhs_description()},
                {"rhs", c.rhs_description()},
                {"matrix", to_json(c.matrix)},
                {"trial", c.trial}};
}

inline IsoCertificate certificate_from_json(const json& j) {
    IsoCertificate c;
    c.degree = j.at("degree").get<std::size_t>();
    c.group_generators = perms_from_json(j.at("group_generators"), c.degree);
    for (const auto& gens : j.at("class_generators")) c.class_generators.push_back(perms_from_json(gens, c.degree));
    c.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    c.class_orders = j.at("class_orders").get<std::vector<std::size_t>>();
    for (const auto& m : j.at("f_generators")) c.f_generators.push_back(matrix_from_json(m));
    c.vector = j.at("vector").get<std::vector<std::int64_t>>();
    c.matrix = matrix_from_json(j.at("matrix"));
    c.trial = j.at("trial").get<std::size_t>();
    return c;
}

inline json to_json(const Verdict& v) {
    json j{{"value", to_string(v.value)}, {"rule", v.rule}, {"detail", v.detail}};
    if (v.certificate) j["certificate"] = to_json(*v.certificate);
    return j;
}

inline Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.value = truth_from_string(j.at("value").get<std::string>());
    v.rule = j.at("rule").get<std::string>();
    v.detail = j.at("detail").get<std::string>();
    if (j.contains("certificate")) v.certificate = certificate_from_json(j.at("certificate"));
    return v;
}

inline json to_json(const ClassificationReport& r) {
    json trail = json::array();
    for (const auto& t : r.trail)
        trail.push_back(json{{"stage", t.stage}, {"rule", t.rule}, {"outcome", t.outcome}, {"detail", t.detail}});
    return json{{"group", r.group},     {"stabilizer", r.stabilizer}, {"degree", r.degree},
                {"order", r.order},     {"retract", to_json(r.retract)}, {"stably", to_json(r.stably)},
                {"trail", std::move(trail)}};
}

inline ClassificationReport report_from_json(const json& j) {
    ClassificationReport r;
    r.group = j.at("group").get<std::string>();
    r.stabilizer = j.at("stabilizer").get<std::string>();
    r.degree = j.at("degree").get<std::size_t>();
    r.order = j.at("order").get<std::size_t>();
    r.retract = verdict_from_json(j.at("retract"));
    r.stably = verdict_from_json(j.at("stably"));
    for (const auto& t : j.at("trail"))
        r.trail.push_back({t.at("stage").get<std::string>(), t.at("rule").get<std::string>(), t.at("outcome").get<std::string>(),
                           t.at("detail").get<std::string>()});
    return r;
}

/// Table wording for a decided or partially decided report.
inline std::string verdict_phrase(const ClassificationReport& r) {
    if (r.stably.value == Truth::yes) return "stably k-rational";
    if (r.retract.value == Truth::no) return "not retract k-rational";
    if (r.retract.value == Truth::yes && r.stably.value == Truth::no) return "not stably but retract k-rational";
    if (r.retract.value == Truth::yes) return "retract k-rational, stable rationality unknown";
    return "unknown";
}

inline bool fully_decided(const ClassificationReport& r) {
    return r.retract.value != Truth::unknown && r.stably.value != Truth::unknown;
}

// ---------------------------------------------------------------------------
// Document envelope

struct ReportDocument {
    std::string version = tool_version;
    std::string command;
    std::optional<GroupDescriptor> input;
    std::uint64_t seed = 0;
    double seconds = 0;  // wall-clock time, the only nondeterministic field
    std::optional<ClassificationReport> report;
    json result;  // payload of the non-classify commands

    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

inline json to_json(const ReportDocument& d) {
    json j{{"version", d.version}, {"command", d.command}, {"seed", d.seed}, {"seconds", d.seconds}};
    j["input"] = d.input ? to_json(*d.input) : json(nullptr);
    if (d.report) {
        json r = to_json(*d.report);
        for (auto it = r.begin(); it != r.end(); ++it) j[it.key()] = it.value();
    }
    if (!d.result.is_null()) j["result"] = d.result;
    return j;
}

inline ReportDocument document_from_json(const json& j) {
    ReportDocument d;
    d.version = j.at("version").get<std::string>();
    d.command = j.at("command").get<std::string>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.seconds = j.at("seconds").get<double>();
    if (!j.at("input").is_null()) d.input = descriptor_from_json(j.at("input"));
    if (j.contains("retract")) d.report = report_from_json(j);
    if (j.contains("result")) d.result = j.at("result");
    return d;
}

/// Re-checks every certificate carried by a document.
inline std::vector<std::pair<std::string, bool>> verify_document(const ReportDocument& d) {
    std::vector<std::pair<std::string, bool>> out;
    if (!d.report) return out;
    if (d.report->retract.certificate) out.emplace_back("retract", verify_certificate(*d.report->retract.certificate));
    if (d.report->stably.certificate) out.emplace_back("stably", verify_certificate(*d.report->stably.certificate));
    return out;
}

}  // namespace normtori
