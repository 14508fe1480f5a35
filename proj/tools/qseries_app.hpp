#pragma once

#include <chrono>
#include <cstdint>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qseries/qseries.hpp"

namespace qseries::app {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
inline json to_json(const Integer& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return json(static_cast<std::int64_t>(v));
    }
    return json(v.str());
}

inline json to_json(const CheckResult& r) {
    json j{{"id", r.id}, {"order", to_json(r.order)}, {"status", r.pass ? "pass" : "fail"}};
    if (r.first_mismatch) {
        j["first_mismatch"] = json{{"exp", to_json(r.first_mismatch->exponent)},
                                   {"lhs", to_json(r.first_mismatch->lhs)},
                                   {"rhs", to_json(r.first_mismatch->rhs)}};
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json to_json(const LaurentSeries& s) {
    json terms = json::array();
    for (const auto& [e, c] : s.terms()) terms.push_back(json{{"exp", to_json(e)}, {"coeff", to_json(c)}});
    return json{{"order", to_json(s.order())}, {"scale", s.scale()}, {"terms", terms}, {"text", s.to_string()}};
}

inline std::string exponent_text(const Rational& e) { return "q^" + (e.is_integer() && e.num() >= 0 ? e.str() : "{" + e.str() + "}"); }

inline std::string describe(const CheckResult& r) {
    std::string s = (r.pass ? "PASS " : "FAIL ") + r.id;
    if (r.first_mismatch) {
        s += " at " + exponent_text(r.first_mismatch->exponent) + ": lhs " + r.first_mismatch->lhs.str() + ", rhs " +
             r.first_mismatch->rhs.str();
    }
    if (!r.note.empty()) s += " (" + r.note + ")";
    return s;
}

inline Rational parse_order(const std::string& text) {
    Rational r;
    try {
        r = Rational::parse(text);
    } catch (const std::exception& e) {
        throw UsageError("invalid order '" + text + "': " + e.what());
    }
    if (r <= Rational(0)) throw UsageError("order must be positive");
    return r;
}

/// Parses "mod=28; parts=1±,13±; parts2=6±,14±". Each "partsK" lists residues
/// with K colours ("parts" means one); a trailing "±" or "+-" adds the mirror
/// residue. Named specs C1..D3 are also accepted.
inline PartitionSpec parse_partition_spec(const std::string& text) {
    if (auto named = partition_specs::by_name(text)) return *named;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    auto to_int = [&](const std::string& s, const std::string& what) {
        const std::string t = trim(s);
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError("partition spec: invalid " + what + " '" + t + "'");
        }
        return std::stoll(t);
    };
    PartitionSpec spec{text, 0, {}};
    std::stringstream clauses(text);
    std::string clause;
    while (std::getline(clauses, clause, ';')) {
        clause = trim(clause);
        if (clause.empty()) continue;
        const auto eq = clause.find('=');
        if (eq == std::string::npos) throw UsageError("partition spec: expected key=value in '" + clause + "'");
        const std::string key = trim(clause.substr(0, eq));
        const std::string value = clause.substr(eq + 1);
        if (key == "mod") {
            spec.modulus = to_int(value, "modulus");
            continue;
        }
        if (key.rfind("parts", 0) != 0) throw UsageError("partition spec: unknown key '" + key + "'");
        const std::int64_t colours = key.size() == 5 ? 1 : to_int(key.substr(5), "colour count");
        if (colours < 1) throw UsageError("partition spec: colour count must be positive");
        std::stringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) {
            item = trim(item);
            bool symmetric = false;
            for (const std::string suffix : {"±", "+-"}) {
                if (item.size() > suffix.size() && item.compare(item.size() - suffix.size(), suffix.size(), suffix) == 0) {
                    item.resize(item.size() - suffix.size());
                    symmetric = true;
                    break;
                }
            }
            spec.classes.push_back({to_int(item, "residue"), colours, symmetric});
        }
    }
    if (spec.modulus <= 0) throw UsageError("partition spec: missing or invalid mod=");
    if (spec.classes.empty()) throw UsageError("partition spec: no parts listed");
    try {
        (void)expand(spec);
    } catch (const PartitionSpecError& e) {
        throw UsageError(std::string("partition spec: ") + e.what());
    }
    return spec;
}

inline std::string sequence_name(const std::string& family) {
    static const std::map<std::string, std::string> names{{"S1*", "alpha"},   {"S2*", "beta"},   {"S3*", "gamma"},
                                                          {"V1*", "alpha'"},  {"V2*", "beta'"},  {"V3*", "gamma'"}};
    const auto it = names.find(family);
    return it == names.end() ? "c" : it->second;
}

inline std::optional<SignedMonomial> parse_mono_option(const std::string& text) {
    if (text.empty() || text == "0") return std::nullopt;
    try {
        const dsl::NodePtr n = dsl::parse_expression(text);
        if (n->kind != dsl::NodeKind::Monomial) throw UsageError("expected a signed monomial, got '" + text + "'");
        return n->monos[0];
    } catch (const dsl::DslError& e) {
        throw UsageError("invalid monomial '" + text + "': " + e.what());
    }
}

struct Options {
    // expand
    std::string expr;
    std::string format = "text";
    std::optional<std::int64_t> scale;
    // shared
    std::string order = "60";
    bool json_out = false;
    bool timing = false;
    std::optional<std::string> seed_fault;
    // verify
    std::string suite;
    std::string file;
    std::int64_t n_max = 4;
    // partitions
    std::string spec;
    std::int64_t n = 10;
    std::string method = "both";
    std::optional<int> theorem;
    bool table = false;
    // dissect
    std::int64_t t = 14, r = 3, s = 7, p = 7;
    // vanish
    std::string family;
    std::int64_t max = 500;
    std::optional<std::int64_t> residue;
    // cf
    std::string cf_name;
    std::string cf_a, cf_b, cf_qpow = "1";
    std::int64_t depth_cap = 0;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int expand(const Options& o) {
        const Rational order = parse_order(o.order);
        if (o.format != "text" && o.format != "json") throw UsageError("--format must be text or json");
        LaurentSeries s;
        try {
            s = dsl::evaluate_to(dsl::parse_expression(o.expr), order).truncated(order);
        } catch (const dsl::DslError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }
        if (o.scale) {
            if (*o.scale <= 0) throw UsageError("--scale must be positive");
            s = s.rescaled(std::lcm(s.scale(), *o.scale));
        }
        if (o.format == "json" || o.json_out) {
            emit(o, "expand", order, json::array({to_json(s)}));
        } else {
            out_ << s.to_string() << "\n";
        }
        return kPass;
    }

    int verify(const Options& o) {
        const Rational order = parse_order(o.order);
        if (o.suite.empty() == o.file.empty()) throw UsageError("give exactly one of --suite or --file");
        std::vector<IdentityCheck> checks;
        std::vector<CheckResult> results;
        if (!o.suite.empty()) {
            const std::string& s = o.suite;
            if (s != "thm21" && s != "thm22" && s != "thm23" && s != "aux" && s != "all") {
                throw UsageError("unknown suite '" + s + "' (thm21, thm22, thm23, aux, all)");
            }
            if (o.n_max < 1) throw UsageError("--n-max must be at least 1");
            auto append = [&checks](std::vector<IdentityCheck> more) {
                checks.insert(checks.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
            };
            if (s == "thm21" || s == "all") append(thm21_checks());
            if (s == "thm22" || s == "all") append(thm22_checks());
            if (s == "thm23" || s == "all") append(thm23_checks(o.n_max));
            if (s == "aux" || s == "all") append(auxiliary_checks());
        } else {
            try {
                const dsl::IdentityFile file = dsl::parse_file(dsl::read_file(o.file));
                checks = dsl::to_checks(file);
            } catch (const dsl::DslError& e) {
                err_ << o.file << ":" << e.what() << "\n";
                return kUsage;
            } catch (const std::runtime_error& e) {
                err_ << "error: " << e.what() << "\n";
                return kUsage;
            }
        }
        if (o.seed_fault && !checks.empty()) checks.front() = perturbed(checks.front(), parse_order(*o.seed_fault));
        try {
            for (const auto& c : checks) results.push_back(check(c, order));
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }
        return report(o, "verify", order, results);
    }

    int partitions(const Options& o) {
        if (o.n < 0) throw UsageError("--n must be nonnegative");
        if (o.theorem) {
            CheckResult r;
            if (*o.theorem == 31) {
                if (o.n < 1) throw UsageError("--n must be at least 1 for theorem 31");
                r = verify_thm31(o.n);
            } else if (*o.theorem == 32) {
                if (o.n < 6) throw UsageError("--n must be at least 6 for theorem 32");
                r = verify_thm32(o.n);
            } else {
                throw UsageError("--theorem must be 31 or 32");
            }
            return report(o, "partitions", Rational(o.n + 1), {r});
        }
        if (o.spec.empty()) throw UsageError("give --spec or --theorem");
        if (o.method != "gf" && o.method != "enum" && o.method != "both") throw UsageError("--method must be gf, enum or both");
        const PartitionSpec spec = parse_partition_spec(o.spec);
        std::optional<CountTable> gf, en;
        if (o.method != "enum") gf = gf_counts(spec, o.n);
        if (o.method != "gf") en = enum_counts(spec, o.n);
        const CountTable& main = gf ? *gf : *en;
        std::optional<std::int64_t> disagreement;
        if (gf && en) {
            for (std::int64_t k = 0; k <= o.n && !disagreement; ++k) {
                if ((*gf)[k] != (*en)[k]) disagreement = k;
            }
        }
        if (o.json_out) {
            json counts = json::array();
            const std::int64_t from = o.table ? 0 : o.n;
            for (std::int64_t k = from; k <= o.n; ++k) counts.push_back(json{{"n", k}, {"count", to_json(main[k])}});
            json row{{"spec", spec.name}, {"method", o.method}, {"counts", counts}, {"agree", !disagreement.has_value()}};
            emit(o, "partitions", Rational(o.n + 1), json::array({row}));
        } else if (o.table) {
            for (std::int64_t k = 0; k <= o.n; ++k) out_ << k << " " << main[k] << "\n";
        } else {
            out_ << main[o.n] << "\n";
        }
        if (disagreement) {
            err_ << "gf and enum disagree at n = " << *disagreement << ": " << (*gf)[*disagreement] << " vs "
                 << (*en)[*disagreement] << "\n";
            return kFail;
        }
        return kPass;
    }

    int dissect(const Options& o) {
        const Rational order = parse_order(o.order);
        const DissectionSpec d{o.t, o.r, o.s, o.p};
        Dissection dis;
        try {
            dis = p_dissect(d, order);
        } catch (const DissectionError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }
        std::vector<CheckResult> results;
        IdentityCheck combined{"dissect.combined", [d](const Rational& w) { return p_dissect(d, w).combined; },
                               [d](const Rational& w) { return dissection_lhs(d, w); }, 1};
        results.push_back(check(combined, order));
        // Component j lives on exponents congruent to j r mod p.
        for (std::int64_t j = 0; j < d.p; ++j) {
            CheckResult support{"dissect.support.j" + std::to_string(j), order, true, std::nullopt, {}};
            for (const auto& [e, c] : dis.components[static_cast<std::size_t>(j)].terms()) {
                const std::int64_t cls = ((e.num() - j * d.r) % d.p + d.p) % d.p;
                if (!e.is_integer() || cls != 0) {
                    support.pass = false;
                    support.first_mismatch = Mismatch{e, c, 0};
                    break;
                }
            }
            if (dis.components[static_cast<std::size_t>(j)].is_zero()) support.note = "zero component";
            results.push_back(support);
        }
        if (!o.json_out) {
            for (std::int64_t j = 0; j < d.p; ++j) {
                const auto& c = dis.components[static_cast<std::size_t>(j)];
                out_ << "j=" << j << ": " << dis.terms[static_cast<std::size_t>(j)].str() << (c.is_zero() ? "  [zero]" : "") << "\n";
            }
        }
        return report(o, "dissect", order, results);
    }

    int vanish(const Options& o) {
        std::string name = o.family;
        if (!name.empty() && name.back() != '*') name += "*";
        std::optional<VanishingFamily> f = vanishing_family(name);
        if (!f) throw UsageError("unknown family '" + o.family + "' (S1, S2, S3, V1, V2, V3)");
        if (o.residue) f->residue = *o.residue;
        VanishingCertificate cert;
        try {
            cert = vanishing_scan(*f, o.max);
        } catch (const DissectionError& e) {
            throw UsageError(e.what());
        }
        const std::string seq = sequence_name(f->name) + "_{" + std::to_string(f->modulus) + "n+" + std::to_string(f->residue) + "}";
        if (o.json_out) {
            json wit = json::array();
            for (const auto& [cls, e, c] : cert.witnesses) wit.push_back(json{{"residue", cls}, {"exp", e}, {"coeff", to_json(c)}});
            json row = to_json(cert.result);
            row["checked"] = cert.checked;
            row["max_abs_off_class"] = to_json(cert.max_abs_off_class);
            row["witnesses"] = wit;
            emit(o, "vanish", Rational(o.max + 1), json::array({row}));
        } else if (cert.result.pass) {
            out_ << seq << " = 0 verified through q^" << o.max << ", " << cert.checked << " coefficients checked; "
                 << cert.witnesses.size() << " other classes nonzero, max |c| = " << cert.max_abs_off_class << "\n";
        } else {
            out_ << describe(cert.result) << "\n";
        }
        return cert.result.pass ? kPass : kFail;
    }

    int cf(const Options& o) {
        const Rational order = parse_order(o.order);
        CFSpec spec;
        if (!o.cf_name.empty()) {
            const auto name = parse_cf_name(o.cf_name);
            if (!name) throw UsageError("unknown continued fraction '" + o.cf_name + "' (R, S1, S2, S3, V1, V2, V3)");
            spec = *name;
        } else {
            Entry12Params p{parse_mono_option(o.cf_a), parse_mono_option(o.cf_b), parse_order(o.cf_qpow)};
            spec = p;
        }
        ConvergentReport rep;
        LaurentSeries product;
        try {
            rep = auto_depth(spec, order, o.depth_cap);
            product = entry12_product(spec, order);
        } catch (const SeriesError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }
        const auto diff = first_difference(rep.series, product, order);
        CheckResult r{"cf.product-vs-convergent", order, rep.stabilized && !diff, diff, {}};
        if (!rep.stabilized) r.note = "did not stabilize";
        if (o.json_out) {
            json row = to_json(r);
            row["depth_used"] = rep.depth_used;
            row["stabilized"] = rep.stabilized;
            row["series"] = to_json(rep.series);
            emit(o, "cf", order, json::array({row}));
        } else {
            out_ << "depth_used=" << rep.depth_used << " stabilized=" << (rep.stabilized ? "true" : "false") << "\n";
            out_ << rep.series.to_string() << "\n" << describe(r) << "\n";
        }
        return r.pass ? kPass : kFail;
    }

    void set_start(std::chrono::steady_clock::time_point t) { start_ = t; }

private:
    int report(const Options& o, const std::string& command, const Rational& order, const std::vector<CheckResult>& results) {
        bool all = true;
        for (const auto& r : results) all = all && r.pass;
        if (o.json_out) {
            json rows = json::array();
            for (const auto& r : results) rows.push_back(to_json(r));
            emit(o, command, order, rows);
        } else {
            std::size_t passed = 0;
            for (const auto& r : results) {
                out_ << describe(r) << "\n";
                passed += r.pass ? 1 : 0;
            }
            out_ << passed << "/" << results.size() << " passed\n";
        }
        return all ? kPass : kFail;
    }

    void emit(const Options& o, const std::string& command, const Rational& order, json results) {
        std::int64_t elapsed = 0;
        if (o.timing) {
            elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
        }
        json report{{"tool_version", kVersion}, {"command", command}, {"order", to_json(order)},
                    {"results", std::move(results)}, {"elapsed_ms", elapsed}};
        out_ << report.dump(2) << "\n";
    }

    std::ostream& out_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact q-series expansion and identity verification"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* c) {
        c->add_option("--order", o.order, "truncation order, integer or a/b")->capture_default_str();
        c->add_flag("--json", o.json_out, "JSON report on stdout");
        c->add_flag("--timing", o.timing, "record elapsed_ms in JSON reports");
        c->add_option("--seed-fault", o.seed_fault)->group("");
    };

    auto* expand = app.add_subcommand("expand", "print the series of a DSL expression");
    expand->add_option("expr", o.expr, "expression, e.g. \"phi(q)\"")->required();
    expand->add_option("--scale", o.scale, "exponent grid denominator");
    expand->add_option("--format", o.format, "text or json")->capture_default_str();
    add_common(expand);

    auto* verify = app.add_subcommand("verify", "run an identity suite or a .qid file");
    verify->add_option("--suite", o.suite, "thm21, thm22, thm23, aux or all");
    verify->add_option("--file", o.file, "identity file");
    verify->add_option("--n-max", o.n_max, "largest power n for thm23")->capture_default_str();
    add_common(verify);

    auto* parts = app.add_subcommand("partitions", "colour partition counts");
    parts->add_option("--spec", o.spec, "C1..D3 or \"mod=28; parts=1+-,13+-; parts2=6+-,14+-\"");
    parts->add_option("--n", o.n, "largest n")->capture_default_str();
    parts->add_option("--method", o.method, "gf, enum or both")->capture_default_str();
    parts->add_option("--theorem", o.theorem, "31 or 32: check the three-term relation");
    parts->add_flag("--table", o.table, "print counts for 0..n");
    add_common(parts);

    auto* dis = app.add_subcommand("dissect", "p-dissection of a theta quotient");
    dis->add_option("--t", o.t)->capture_default_str();
    dis->add_option("--r", o.r)->capture_default_str();
    dis->add_option("--s", o.s)->capture_default_str();
    dis->add_option("--p", o.p)->capture_default_str();
    add_common(dis);

    auto* van = app.add_subcommand("vanish", "vanishing-coefficient scan");
    van->add_option("--family", o.family, "S1, S2, S3, V1, V2 or V3")->required();
    van->add_option("--max", o.max, "largest exponent")->capture_default_str();
    van->add_option("--residue", o.residue, "override the vanishing residue");
    add_common(van);

    auto* cfc = app.add_subcommand("cf", "continued-fraction convergent report");
    cfc->add_option("--name", o.cf_name, "R, S1, S2, S3, V1, V2 or V3");
    cfc->add_option("--a", o.cf_a, "Entry 12 parameter a, e.g. q^1/4");
    cfc->add_option("--b", o.cf_b, "Entry 12 parameter b");
    cfc->add_option("--qpow", o.cf_qpow, "Q = q^qpow")->capture_default_str();
    cfc->add_option("--depth-cap", o.depth_cap, "largest depth tried (0: automatic)");
    add_common(cfc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    Runner runner(out, err);
    try {
        if (*expand) return runner.expand(o);
        if (*verify) return runner.verify(o);
        if (*parts) return runner.partitions(o);
        if (*dis) return runner.dissect(o);
        if (*van) return runner.vanish(o);
        if (*cfc) return runner.cf(o);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace qseries::app
