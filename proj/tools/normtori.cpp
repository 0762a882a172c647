// Command-line front end: classify, resolve, cohom, family, catalog, verify.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "normtori/cohom.hpp"
#include "normtori/report_io.hpp"

using namespace normtori;

namespace {

constexpr int exit_decided = 0;
constexpr int exit_error = 1;
constexpr int exit_unknown = 2;

struct Common {
    std::uint64_t seed = 0;
    std::size_t trials = 100000;
    double time_budget = 20.0;
    std::size_t order_cap = 1000;
    std::size_t h1_cap = 200;
    std::size_t stabilizer_point = 1;
    bool skip_direct = false;
    bool json_out = false;
    bool text_out = false;
    unsigned jobs = 1;
};

/// A group argument is a path to a JSON group file or a catalog label.
std::vector<GroupDescriptor> read_descriptors(const std::string& arg, std::size_t stabilizer_point) {
    std::ifstream in(arg);
    if (!in) return {descriptor_from_label(arg, stabilizer_point)};
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(arg + ": " + e.what());
    }
    std::vector<GroupDescriptor> out;
    if (j.is_array()) {
        for (const auto& x : j) out.push_back(descriptor_from_json(x));
    } else {
        out.push_back(descriptor_from_json(j));
    }
    return out;
}

std::vector<GroupDescriptor> collect(const std::vector<std::string>& args, std::size_t stabilizer_point) {
    std::vector<GroupDescriptor> out;
    for (const auto& a : args)
        for (auto& d : read_descriptors(a, stabilizer_point)) out.push_back(std::move(d));
    return out;
}

GroupLimits limits_of(const Common& c) {
    GroupLimits lim;
    lim.order_cap = c.order_cap;
    return lim;
}

PermGroup resolve_group(const GroupDescriptor& d, const Common& c) {
    if (c.order_cap > GroupLimits::hard_order_cap)
        throw InvalidInput("--order-cap above " + std::to_string(GroupLimits::hard_order_cap) + " is not supported");
    if (c.order_cap > GroupLimits{}.order_cap)
        std::cerr << "warning: order cap raised to " << c.order_cap << "; subgroup tables may be slow\n";
    return d.resolve().with_limits(limits_of(c));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const std::vector<json>& docs, std::ostream& os) {
    if (docs.size() == 1)
        os << docs[0].dump(2) << "\n";
    else
        os << json(docs).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// classify

ReportDocument run_classify(const GroupDescriptor& d, const Common& c, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    ReportDocument doc;
    doc.command = "classify";
    doc.input = d;
    doc.seed = seed;
    ClassifyConfig cfg;
    cfg.seed = seed;
    cfg.trials = c.trials;
    cfg.time_budget_seconds = c.time_budget;
    cfg.limits = limits_of(c);
    cfg.cohom.h1_cap = c.h1_cap;
    cfg.skip_direct = c.skip_direct;
    cfg.stabilizer_point = d.stabilizer_point - 1;
    cfg.base.seed = seed;
    doc.report = classify(resolve_group(d, c), cfg, d.name());
    doc.seconds = seconds_since(t0);
    return doc;
}

void print_row(const ClassificationReport& r, std::ostream& os) {
    auto rule = [](const Verdict& v) { return v.rule.empty() ? std::string("-") : v.rule; };
    os << std::left << std::setw(14) << r.group << " deg " << std::setw(3) << r.degree << " order " << std::setw(6) << r.order
       << " retract " << std::setw(8) << to_string(r.retract.value) << " stably " << std::setw(8) << to_string(r.stably.value)
       << verdict_phrase(r) << "  [" << rule(r.retract) << " / " << rule(r.stably) << "]\n";
}

int cmd_classify(const std::vector<std::string>& groups, const Common& c) {
    auto descs = collect(groups, c.stabilizer_point);
    std::vector<std::optional<ReportDocument>> docs(descs.size());
    std::vector<std::string> errors(descs.size());
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next == descs.size()) return;
                i = next++;
            }
            try {
                // descriptor i runs with seed + i, independent of scheduling
                docs[i] = run_classify(descs[i], c, c.seed + i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(c.jobs, static_cast<unsigned>(descs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = exit_decided;
    std::vector<json> out;
    for (std::size_t i = 0; i < descs.size(); ++i) {
        if (!docs[i]) {
            std::cerr << "error: " << descs[i].name() << ": " << errors[i] << "\n";
            code = exit_error;
            continue;
        }
        if (code == exit_decided && !fully_decided(*docs[i]->report)) code = exit_unknown;
        if (c.json_out)
            out.push_back(to_json(*docs[i]));
        else
            print_row(*docs[i]->report, std::cout);
    }
    if (c.json_out) emit(out, std::cout);
    return code;
}

// ---------------------------------------------------------------------------
// resolve

int cmd_resolve(const std::vector<std::string>& groups, const Common& c) {
    std::vector<json> out;
    for (const auto& d : collect(groups, c.stabilizer_point)) {
        auto t0 = std::chrono::steady_clock::now();
        PermGroup g = resolve_group(d, c);
        auto table = subgroup_classes(g);
        GLattice j = chevalley_module(g);
        BaseSearchOptions opt;
        opt.seed = c.seed;
        auto candidates = minimize_base(dual(j), table, opt);
        auto r = flabby_resolution(j, table, true, opt);
        bool ok = verify_resolution(r);

        json summands = json::array();
        for (auto [cls, mult] : r.summands)
            summands.push_back({{"class", cls}, {"structure", table.classes[cls].structure},
                                {"order", table.classes[cls].order}, {"multiplicity", mult}});
        json ranks = json::array();
        for (const auto& b : candidates) ranks.push_back(b.rank);
        ReportDocument doc;
        doc.command = "resolve";
        doc.input = d;
        doc.seed = c.seed;
        doc.result = {{"rank_J", r.M.rank()},       {"rank_P", r.P.rank()},         {"rank_F", r.F.rank()},
                      {"summands", summands},        {"base_strategy", r.base.strategy}, {"candidate_base_ranks", ranks},
                      {"verified", ok}};
        doc.seconds = seconds_since(t0);
        if (c.json_out) {
            out.push_back(to_json(doc));
        } else {
            std::cout << d.name() << ": 0 -> J (rank " << r.M.rank() << ") -> P (rank " << r.P.rank() << ") -> F (rank "
                      << r.F.rank() << ") -> 0, " << (ok ? "verified" : "VERIFICATION FAILED") << "\n  P =";
            bool first = true;
            for (auto [cls, mult] : r.summands) {
                std::cout << (first ? " " : " + ") << (table.classes[cls].order == g.order() ? std::string("Z")
                                                       : table.classes[cls].order == 1 ? std::string("Z[G]")
                                                                                       : "Z[G/" + table.classes[cls].structure + "]");
                if (mult > 1) std::cout << "^" << mult;
                first = false;
            }
            std::cout << "\n  candidate base ranks: " << ranks.dump() << "\n";
        }
        if (!ok) return exit_error;
    }
    if (c.json_out) emit(out, std::cout);
    return exit_decided;
}

// ---------------------------------------------------------------------------
// cohom

int cmd_cohom(const std::vector<std::string>& groups, const std::vector<std::string>& subgroup, const std::string& lattice,
              const Common& c) {
    CohomLimits lim;
    lim.h1_cap = c.h1_cap;
    int code = exit_decided;
    std::vector<json> out;
    for (const auto& d : collect(groups, c.stabilizer_point)) {
        auto t0 = std::chrono::steady_clock::now();
        PermGroup g = resolve_group(d, c);
        GLattice m = chevalley_module(g);
        std::optional<SubgroupClassTable> table;
        if (lattice == "F" || subgroup.empty()) table = subgroup_classes(g);
        if (lattice == "F") {
            BaseSearchOptions opt;
            opt.seed = c.seed;
            m = flabby_class(m, *table, opt).F;
        }
        std::vector<std::pair<std::string, PermGroup>> subs;
        if (subgroup.empty()) {
            for (const auto& cl : table->classes) subs.emplace_back(cl.structure, cl.group);
        } else {
            std::vector<Perm> gens;
            for (const auto& s : subgroup) gens.push_back(Perm::from_cycles(g.degree(), s));
            PermGroup h(g.degree(), gens, g.limits());
            subs.emplace_back("given", h);
        }
        json rows = json::array();
        for (const auto& [label, h] : subs) {
            json row{{"structure", label}, {"order", h.order()}, {"fixed_rank", fixed_sublattice(m, h).size()},
                     {"H^-1", tate_hminus1(m, h).to_string()}, {"H^0", tate_h0(m, h).to_string()}};
            try {
                row["H^1"] = h1(m, h, lim).to_string();
            } catch (const CapExceeded& e) {
                row["H^1"] = nullptr;
                code = exit_unknown;
            }
            rows.push_back(std::move(row));
        }
        ReportDocument doc;
        doc.command = "cohom";
        doc.input = d;
        doc.seed = c.seed;
        doc.result = {{"lattice", lattice}, {"rank", m.rank()}, {"subgroups", rows}};
        doc.seconds = seconds_since(t0);
        if (c.json_out) {
            out.push_back(to_json(doc));
            continue;
        }
        std::cout << d.name() << ", lattice " << lattice << " of rank " << m.rank() << ", " << rows.size() << " subgroup classes\n";
        std::cout << "  " << std::left << std::setw(18) << "subgroup" << std::setw(7) << "order" << std::setw(7) << "fixed"
                  << std::setw(14) << "H^-1" << std::setw(14) << "H^0"
                  << "H^1\n";
        for (const auto& r : rows)
            std::cout << "  " << std::setw(18) << r["structure"].get<std::string>() << std::setw(7) << r["order"].get<std::size_t>()
                      << std::setw(7) << r["fixed_rank"].get<std::size_t>() << std::setw(14) << r["H^-1"].get<std::string>()
                      << std::setw(14) << r["H^0"].get<std::string>()
                      << (r["H^1"].is_null() ? std::string("(cap)") : r["H^1"].get<std::string>()) << "\n";
    }
    if (c.json_out) emit(out, std::cout);
    return code;
}

// ---------------------------------------------------------------------------
// family

int cmd_family(std::size_t d, std::size_t q, const Common& c) {
    auto p = psl_family_params(d, q);
    ReportDocument doc;
    doc.command = "family";
    doc.seed = c.seed;
    doc.result = {{"d", p.d},
                  {"q", p.q},
                  {"characteristic", p.characteristic},
                  {"e", p.e},
                  {"p", to_json(p.p)},
                  {"order_G", to_json(p.order_G)},
                  {"order_H", to_json(p.order_H)}};
    if (c.json_out) {
        std::cout << to_json(doc).dump(2) << "\n";
    } else {
        std::cout << "PSL(" << d << ", " << q << ") on " << p.p << " points: |G| = " << p.order_G << ", H = C" << p.p << " x| C"
                  << d << " of order " << p.order_H << "\n";
    }
    return exit_decided;
}

// ---------------------------------------------------------------------------
// catalog

int cmd_catalog_list(const Common& c) {
    json rows = json::array();
    for (const auto& e : catalog::entries()) {
        if (c.json_out)
            rows.push_back({{"label", e.label}, {"name", e.name}, {"degree", e.degree}, {"order", e.order}});
        else
            std::cout << std::left << std::setw(8) << e.label << std::setw(6) << e.degree << std::setw(8) << e.order << e.name << "\n";
    }
    if (c.json_out) std::cout << rows.dump(2) << "\n";
    return exit_decided;
}

int cmd_catalog_self_test(const Common& c) {
    auto checks = catalog::self_test();
    bool ok = true;
    json rows = json::array();
    for (const auto& f : checks) {
        ok = ok && f.ok;
        if (c.json_out)
            rows.push_back({{"label", f.label}, {"check", f.check}, {"ok", f.ok}, {"detail", f.detail}});
        else if (!f.ok)
            std::cout << "FAIL " << f.label << ": " << f.check << " (" << f.detail << ")\n";
    }
    if (c.json_out)
        std::cout << rows.dump(2) << "\n";
    else
        std::cout << checks.size() << " checks, " << (ok ? "all passed" : "failures above") << "\n";
    return ok ? exit_decided : exit_error;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& path, const Common& c) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    json j = json::parse(in);
    std::vector<json> items = j.is_array() ? j.get<std::vector<json>>() : std::vector<json>{j};
    bool ok = true;
    std::size_t count = 0;
    json rows = json::array();
    for (const auto& item : items) {
        auto doc = document_from_json(item);
        for (const auto& [slot, good] : verify_document(doc)) {
            ++count;
            ok = ok && good;
            std::string name = doc.report ? doc.report->group : "?";
            if (c.json_out)
                rows.push_back({{"group", name}, {"verdict", slot}, {"ok", good}});
            else
                std::cout << name << " " << slot << " certificate: " << (good ? "verified" : "INVALID") << "\n";
        }
    }
    if (c.json_out)
        std::cout << rows.dump(2) << "\n";
    else if (count == 0)
        std::cout << "no certificates in " << path << "\n";
    return ok ? exit_decided : exit_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retract and stable rationality of norm one tori"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);
    Common c;

    auto add_output = [&](CLI::App* sub) {
        auto* j = sub->add_flag("--json", c.json_out, "Write JSON documents");
        auto* t = sub->add_flag("--text", c.text_out, "Write plain text (default)");
        j->excludes(t);
    };
    auto add_limits = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
        sub->add_option("--order-cap", c.order_cap, "Largest group order for subgroup tables")->capture_default_str();
        sub->add_option("--h1-cap", c.h1_cap, "Largest subgroup order for H^1")->capture_default_str();
        sub->add_option("--stabilizer-point", c.stabilizer_point, "Point whose stabilizer is H (1-based)")->capture_default_str();
    };

    std::vector<std::string> groups;
    auto* classify_cmd = app.add_subcommand("classify", "Decide retract and stable rationality");
    classify_cmd->add_option("groups", groups, "Catalog labels or JSON group files")->required();
    add_limits(classify_cmd);
    classify_cmd->add_option("--trials", c.trials, "Certificate search trials")->capture_default_str();
    classify_cmd->add_option("--time-budget", c.time_budget, "Certificate search wall-clock budget in seconds")->capture_default_str();
    classify_cmd->add_flag("--skip-direct", c.skip_direct, "Use the theorem-based rules only");
    classify_cmd->add_option("-j,--jobs", c.jobs, "Descriptors classified in parallel")->capture_default_str();
    add_output(classify_cmd);

    auto* resolve_cmd = app.add_subcommand("resolve", "Flabby resolution of the character lattice");
    resolve_cmd->add_option("groups", groups, "Catalog labels or JSON group files")->required();
    add_limits(resolve_cmd);
    add_output(resolve_cmd);

    std::vector<std::string> subgroup;
    std::string lattice = "J";
    auto* cohom_cmd = app.add_subcommand("cohom", "Tate cohomology over subgroup classes");
    cohom_cmd->add_option("groups", groups, "Catalog labels or JSON group files")->required();
    cohom_cmd->add_option("--subgroup", subgroup, "Generators of one subgroup, in cycle notation");
    cohom_cmd->add_option("--lattice", lattice, "J (character lattice) or F (its flabby class)")
        ->check(CLI::IsMember({"J", "F"}))
        ->capture_default_str();
    add_limits(cohom_cmd);
    add_output(cohom_cmd);

    std::size_t fd = 0, fq = 0;
    auto* family_cmd = app.add_subcommand("family", "Frobenius subgroup arithmetic in PSL(d, q)");
    family_cmd->add_option("d", fd, "Dimension")->required();
    family_cmd->add_option("q", fq, "Field size")->required();
    add_output(family_cmd);

    auto* catalog_cmd = app.add_subcommand("catalog", "Built-in groups");
    catalog_cmd->require_subcommand(1);
    auto* list_cmd = catalog_cmd->add_subcommand("list", "List catalog entries");
    add_output(list_cmd);
    auto* self_test_cmd = catalog_cmd->add_subcommand("self-test", "Check every entry against its recorded facts");
    add_output(self_test_cmd);

    std::string report_path;
    auto* verify_cmd = app.add_subcommand("verify", "Re-check certificates in a classify JSON report");
    verify_cmd->add_option("report", report_path, "Report file")->required()->check(CLI::ExistingFile);
    add_output(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_decided : exit_error;
    }

    try {
        if (*classify_cmd) return cmd_classify(groups, c);
        if (*resolve_cmd) return cmd_resolve(groups, c);
        if (*cohom_cmd) return cmd_cohom(groups, subgroup, lattice, c);
        if (*family_cmd) return cmd_family(fd, fq, c);
        if (*list_cmd) return cmd_catalog_list(c);
        if (*self_test_cmd) return cmd_catalog_self_test(c);
        if (*verify_cmd) return cmd_verify(report_path, c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
