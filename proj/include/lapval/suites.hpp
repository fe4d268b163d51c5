#pragma once

// Named verification suites: randomized runs of the property checks, each
// producing a JSON report. All randomness derives from the seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lapval/dissect.hpp"
#include "lapval/errors.hpp"
#include "lapval/functrans.hpp"
#include "lapval/io.hpp"
#include "lapval/laplace.hpp"
#include "lapval/oracle.hpp"
#include "lapval/random.hpp"
#include "lapval/valuation.hpp"

namespace lapval {

struct SuiteConfig {
    int n = 2;
    std::uint64_t seed = 42;
    std::optional<double> tol;
    std::int64_t oracle_n = 1000000;
};

struct SuiteOutcome {
    Json report;
    bool passed = false;
};

inline Json report_to_json(const CheckReport& r) {
    Json witnesses = Json::array();
    for (const auto& w : r.witnesses) {
        Json j{{"point", vector_to_json(w.point)}, {"rel_err", std::isfinite(w.rel_err) ? Json(w.rel_err) : Json("inf")}};
        if (w.body) j["body"] = body_to_json(*w.body);
        if (!w.note.empty()) j["note"] = w.note;
        witnesses.push_back(std::move(j));
    }
    return {{"name", r.name},
            {"trials", r.trials},
            {"max_rel_err", std::isfinite(r.max_rel_err) ? Json(r.max_rel_err) : Json("inf")},
            {"tol", r.tol},
            {"passed", r.passed},
            {"witnesses", std::move(witnesses)}};
}

namespace detail {

inline void require_n(const SuiteConfig& cfg, int lo, int hi) {
    if (cfg.n < lo || cfg.n > hi)
        throw DomainError("suite needs n in " + std::to_string(lo) + ".." + std::to_string(hi));
}

inline SuiteOutcome finish(const std::string& suite, const SuiteConfig& cfg, const std::vector<CheckReport>& reports,
                           Json extra = Json::object()) {
    Json checks = Json::array();
    bool passed = true;
    for (const auto& r : reports) {
        checks.push_back(report_to_json(r));
        passed = passed && r.passed;
    }
    Json report{{"suite", suite}, {"n", cfg.n}, {"seed", cfg.seed}, {"passed", passed}, {"checks", std::move(checks)}};
    if (!extra.empty()) report["details"] = std::move(extra);
    return {std::move(report), passed};
}

// Outcome checks that are either right or wrong record 0 or inf.
inline void record_outcome(CheckReport& r, bool ok, int n, const std::string& note) {
    r.record(ok ? 0.0 : std::numeric_limits<double>::infinity(), nullptr, Vector::Zero(n), note);
}

inline SuiteOutcome suite_split(const SuiteConfig& cfg) {
    require_n(cfg, 1, 6);
    InstanceGenerator gen(cfg.seed);
    CheckReport total("split", cfg.tol.value_or(1e-9));
    const auto z = laplace_valuation();
    for (int t = 0; t < 200; ++t) {
        const Polytope k = gen.body(cfg.n);
        const Hyperplane h = gen.cut(k);
        total.merge(check_split(z, k, h, {gen.point(cfg.n)}, total.tol));
    }
    return finish("split", cfg, {total});
}

inline SuiteOutcome suite_gl(const SuiteConfig& cfg) {
    require_n(cfg, 1, 6);
    InstanceGenerator gen(cfg.seed);
    CheckReport total("gl-covariance", cfg.tol.value_or(1e-9));
    const auto z = laplace_valuation();
    for (int t = 0; t < 200; ++t) {
        const Polytope k = gen.body(cfg.n);
        const LinearMap phi = gen.upper_triangular(cfg.n);
        total.merge(check_gl_covariance(z, k, phi, {gen.point(cfg.n)}, total.tol));
    }
    return finish("gl", cfg, {total});
}

inline SuiteOutcome suite_translate(const SuiteConfig& cfg) {
    require_n(cfg, 1, 6);
    InstanceGenerator gen(cfg.seed);
    CheckReport total("translation-covariance", cfg.tol.value_or(1e-9));
    const auto z = laplace_valuation();
    for (int t = 0; t < 200; ++t) {
        const Polytope k = gen.body(cfg.n);
        const Vector shift = gen.vector(cfg.n, -1.0, 1.0);
        total.merge(check_translation_covariance(z, k, shift, {gen.point(cfg.n)}, total.tol));
    }
    return finish("translate", cfg, {total});
}

inline SuiteOutcome suite_cube_recursion(const SuiteConfig& cfg) {
    require_n(cfg, 1, 10);
    CheckReport total("cube-recursion", cfg.tol.value_or(1e-10));
    const auto z = laplace_valuation();
    double c = 0.0, c_neg = 0.0;
    for (int p = 1; p <= 10; ++p)
        for (int q = 1; q <= 10; ++q) {
            auto r = check_cube_recursion(z, cfg.n, p, q, total.tol);
            total.merge(r.report);
            c = r.c;
            c_neg = r.c_negative;
        }
    CheckReport calib("calibration", total.tol);
    calib.record(relative_error(c - 1.0, 1.0), nullptr, basis_vector(cfg.n, 0), "c = 1");
    return finish("cube-recursion", cfg, {total, calib}, {{"c", c}, {"c_negative_axis", c_neg}});
}

inline SuiteOutcome suite_eq30(const SuiteConfig& cfg) {
    require_n(cfg, 2, 8);
    InstanceGenerator gen(cfg.seed);
    const Polytope simplex = Polytope::standard_simplex(cfg.n);
    const PointFunction f = [&](const Vector& x) { return laplace_polytope(simplex, x); };
    CheckReport total("eq30", cfg.tol.value_or(1e-9));
    for (int l = 1; l <= 9; ++l) total.merge(check_eq30(f, 0.1 * l, gen.points(cfg.n, 20), total.tol));
    return finish("eq30", cfg, {total});
}

inline SuiteOutcome suite_permutation(const SuiteConfig& cfg) {
    require_n(cfg, 2, 8);
    InstanceGenerator gen(cfg.seed);
    const Polytope simplex = Polytope::standard_simplex(cfg.n);
    const PointFunction f = [&](const Vector& x) { return laplace_polytope(simplex, x); };
    return finish("permutation", cfg,
                  {check_permutation_symmetry(f, gen.points(cfg.n, 50), cfg.tol.value_or(1e-12), Permutations::all)});
}

inline SuiteOutcome suite_dissection(const SuiteConfig& cfg) {
    require_n(cfg, 1, 6);
    InstanceGenerator gen(cfg.seed);
    const double tol = cfg.tol.value_or(1e-9);
    const Polytope cube = Polytope::cube(cfg.n);
    const auto pieces = cube_order_simplices(cfg.n);
    CheckReport order("order-simplices", tol);
    for (const auto& x : gen.points(cfg.n, 20)) {
        double sum = 0.0;
        for (const auto& s : pieces) sum += laplace_simplex(s, x);
        const double whole = laplace_polytope(cube, x);
        order.record(relative_error(sum - whole, whole), &cube, x);
    }
    std::vector<CheckReport> reports{order};
    if (cfg.n >= 2) {
        CheckReport lattice("lattice-identity", tol), reduction("reduction-identity", tol);
        for (int m = cfg.n; m <= 6; ++m)
            for (double s : {-2.0, -0.5, 0.5, 2.0}) {
                const Vector x = s * basis_vector(cfg.n, 0);
                const auto a = lattice_identity(m, cfg.n, s);
                lattice.record(relative_error(a.lhs - a.rhs, a.lhs), nullptr, x, "m = " + std::to_string(m));
                const auto b = reduction_identity(m, cfg.n, s);
                reduction.record(relative_error(b.lhs - b.rhs, b.lhs), nullptr, x, "m = " + std::to_string(m));
            }
        reports.push_back(lattice);
        reports.push_back(reduction);
    }
    return finish("dissection", cfg, reports);
}

inline SuiteOutcome suite_continuity(const SuiteConfig& cfg) {
    require_n(cfg, 1, 6);
    const double tol = cfg.tol.value_or(1e-3);
    const Polytope cube = Polytope::cube(cfg.n);
    std::vector<Polytope> seq;
    for (double i : {1.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 10000.0}) {
        Vector hi = Vector::Ones(cfg.n);
        hi[0] = 1.0 + 1.0 / i;
        seq.push_back(Polytope::box(Vector::Zero(cfg.n), hi));
    }
    InstanceGenerator gen(cfg.seed);
    std::vector<CheckReport> reports;
    Json extra = Json::array();
    for (const Vector& x : {Vector(Vector::Zero(cfg.n)), gen.vector(cfg.n, -1.0, 1.0)}) {
        auto r = check_continuity(laplace_valuation(), seq, cube, x, tol);
        extra.push_back({{"point", vector_to_json(x)}, {"errors", r.errors}, {"distances", r.distances}});
        reports.push_back(std::move(r.report));
    }
    return finish("continuity", cfg, reports, {{"sequences", std::move(extra)}});
}

inline const std::vector<std::string>& function_h_names() {
    static const std::vector<std::string> names{"identity", "saturate", "scaled:-2"};
    return names;
}

inline SuiteOutcome suite_function_valuation(const SuiteConfig& cfg) {
    require_n(cfg, 1, 4);
    InstanceGenerator gen(cfg.seed);
    CheckReport total("function-valuation", cfg.tol.value_or(1e-9));
    for (int t = 0; t < 100; ++t) {
        const GrowthFunction h = growth_from_name(function_h_names()[t % 3]);
        const StepFunction f = gen.step_function(cfg.n), g = gen.step_function(cfg.n);
        total.merge(check_function_valuation(f, g, h, gen.points(cfg.n, 3), total.tol));
    }
    return finish("function-valuation", cfg, {total});
}

inline SuiteOutcome suite_function_covariance(const SuiteConfig& cfg) {
    require_n(cfg, 1, 4);
    InstanceGenerator gen(cfg.seed);
    CheckReport total("function-covariance", cfg.tol.value_or(1e-9));
    for (int t = 0; t < 100; ++t) {
        const GrowthFunction h = growth_from_name(function_h_names()[t % 3]);
        const StepFunction f = gen.step_function(cfg.n);
        const LinearMap phi = gen.upper_triangular(cfg.n);
        const Vector shift = gen.vector(cfg.n, -1.0, 1.0);
        total.merge(check_function_covariance(f, h, phi, shift, gen.points(cfg.n, 3), total.tol));
    }
    return finish("function-covariance", cfg, {total});
}

// Admissible h pass validation, the specimens fail it, and for sqrtsign the
// sample functions g_j = alpha_j 1_{E_j} have L1 norm 2^{-j} while z(g_j)(o)
// stays >= 1 in magnitude, for j = 1..20.
inline SuiteOutcome suite_growth_rejection(const SuiteConfig& cfg) {
    require_n(cfg, 1, 8);
    CheckReport accept("admissible-accepted", 0.0), reject("specimens-rejected", 0.0), gen("growth-witnesses", 0.0);
    Json details = Json::object();
    for (const std::string name : {"identity", "saturate", "scaled:-2"}) {
        const GrowthFunction g = growth_from_name(name);
        bool ok = true;
        try {
            validate_h(g.h, g.gamma);
        } catch (const Error&) {
            ok = false;
        }
        record_outcome(accept, ok, cfg.n, name);
    }
    for (const std::string name : {"affine1", "sqrtsign"}) {
        const GrowthFunction g = growth_from_name(name);
        std::string why = "accepted";
        try {
            validate_h(g.h, g.gamma);
        } catch (const ZeroViolation& e) {
            why = std::string("zero violation: ") + e.what();
        } catch (const GrowthViolation& e) {
            why = std::string("growth violation: ") + e.what();
        } catch (const ContinuityViolation& e) {
            why = std::string("continuity violation: ") + e.what();
        }
        record_outcome(reject, why != "accepted", cfg.n, name);
        details[name] = why;
    }
    const auto witnesses = growth_witnesses(growth_from_name("sqrtsign"), cfg.n, 20);
    record_outcome(gen, witnesses.size() == 20, cfg.n, "a witness at every level j <= 20");
    Json rows = Json::array();
    for (const auto& w : witnesses) {
        const bool ok = std::abs(w.l1_norm - std::ldexp(1.0, -w.j)) <= 1e-12 * std::ldexp(1.0, -w.j) &&
                        std::abs(w.value_at_origin) >= 1.0;
        record_outcome(gen, ok, cfg.n, "j = " + std::to_string(w.j));
        rows.push_back({{"j", w.j}, {"alpha", w.alpha}, {"ratio", w.ratio}, {"l1_norm", w.l1_norm},
                        {"value_at_origin", w.value_at_origin}});
    }
    details["sqrtsign_witnesses"] = std::move(rows);
    record_outcome(gen, growth_witnesses(growth_from_name("identity"), cfg.n, 20).empty(), cfg.n,
                   "identity admits no witness");
    return finish("growth-rejection", cfg, {accept, reject, gen}, std::move(details));
}

// Fraction of cases whose exact value lies outside 4 standard errors of the
// Monte Carlo estimate; tol is the allowed fraction.
inline SuiteOutcome suite_oracle(const SuiteConfig& cfg) {
    require_n(cfg, 1, 4);
    InstanceGenerator gen(cfg.seed);
    CheckReport r("oracle-coverage", cfg.tol.value_or(0.05));
    int misses = 0;
    double worst = 0.0;
    constexpr int cases = 100;
    for (int t = 0; t < cases; ++t) {
        const Polytope k = gen.body(cfg.n);
        const Vector x = gen.point(cfg.n);
        const double exact = laplace_polytope(k, x);
        const auto est = mc_body(k, x, cfg.oracle_n, cfg.seed + 1000003ull * (t + 1));
        const double score = std::abs(exact - est.mean) / std::max(est.std_error, 1e-300);
        worst = std::max(worst, score);
        if (score > 4.0) {
            ++misses;
            if (r.witnesses.size() < CheckReport::kMaxWitnesses)
                r.witnesses.push_back(Witness{k, x, score, "exact value outside 4 standard errors"});
        }
    }
    r.trials = cases;
    r.max_rel_err = static_cast<double>(misses) / cases;
    r.passed = r.max_rel_err <= r.tol;
    return finish("oracle", cfg, {r}, {{"misses", misses}, {"max_score", worst}, {"samples", cfg.oracle_n}});
}

}  // namespace detail

using SuiteRunner = std::function<SuiteOutcome(const SuiteConfig&)>;

inline const std::map<std::string, SuiteRunner>& suite_registry() {
    static const std::map<std::string, SuiteRunner> suites{
        {"split", detail::suite_split},
        {"gl", detail::suite_gl},
        {"translate", detail::suite_translate},
        {"cube-recursion", detail::suite_cube_recursion},
        {"eq30", detail::suite_eq30},
        {"permutation", detail::suite_permutation},
        {"dissection", detail::suite_dissection},
        {"continuity", detail::suite_continuity},
        {"function-valuation", detail::suite_function_valuation},
        {"function-covariance", detail::suite_function_covariance},
        {"growth-rejection", detail::suite_growth_rejection},
        {"oracle", detail::suite_oracle},
    };
    return suites;
}

// Throws DomainError for unknown names or out-of-range configuration.
inline SuiteOutcome run_suite(const std::string& name, const SuiteConfig& cfg) {
    const auto it = suite_registry().find(name);
    if (it == suite_registry().end()) throw DomainError("unknown suite '" + name + "'");
    if (cfg.tol && !(*cfg.tol > 0.0)) throw DomainError("tol must be > 0");
    if (cfg.oracle_n < kMinOracleSamples) throw DomainError("oracle-n must be >= 1000");
    return it->second(cfg);
}

}  // namespace lapval
