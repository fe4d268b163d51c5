#pragma once

// lapval transform | verify | dissect
//
// Exit codes: 0 success, 1 failed verification (report still written),
// 2 configuration or parse error, 3 degenerate geometry.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lapval/dissect.hpp"
#include "lapval/errors.hpp"
#include "lapval/functrans.hpp"
#include "lapval/io.hpp"
#include "lapval/laplace.hpp"
#include "lapval/suites.hpp"

namespace lapval::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kDegenerate = 3 };

struct TransformArgs {
    std::string body, step, h = "identity", range, points, out;
    int axis = 1;
};

struct VerifyArgs {
    std::string suite, out;
    int n = 2;
    std::uint64_t seed = 42;
    std::optional<double> tol;
    std::int64_t oracle_n = 1000000;
};

struct DissectArgs {
    std::string kind, out;
    int n = 2, m = 2, k = 1;
    double lambda = 0.5;
};

// Shortest representation that reads back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// "a:b:step", inclusive of b up to half a step.
inline std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("range: cannot read '" + item + "'");
        }
    }
    if (parts.size() != 3) throw ParseError("range must look like a:b:step");
    const double a = parts[0], b = parts[1], step = parts[2];
    if (!(step > 0.0) || !(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw ParseError("range needs a <= b and step > 0");
    const auto count = static_cast<long>(std::floor((b - a) / step + 0.5)) + 1;
    if (count > 10000000) throw ParseError("range has more than 1e7 points");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) out.push_back(a + step * static_cast<double>(i));
    return out;
}

class OutputSink {
public:
    OutputSink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ParseError("cannot open '" + path + "' for writing");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

inline int run_transform(const TransformArgs& a, std::ostream& out) {
    if (a.body.empty() == a.step.empty()) throw ParseError("give exactly one of --body and --step");
    if (a.range.empty() == a.points.empty()) throw ParseError("give exactly one of --range and --points");

    std::optional<Polytope> body;
    std::optional<StepFunction> step;
    std::optional<GrowthFunction> h;
    int n = 0;
    if (!a.body.empty()) {
        body = body_from_json(read_json_file(a.body));
        n = body->ambient_dim();
        if (!body->full_dimensional()) throw DegenerateInput("body is not full-dimensional");
    } else {
        step = step_from_json(read_json_file(a.step));
        h = growth_from_name(a.h);
        n = step->ambient_dim();
        check_disjoint(*step);
    }

    std::vector<Vector> xs;
    if (!a.range.empty()) {
        if (a.axis < 1 || a.axis > n) throw ParseError("--axis must lie in 1.." + std::to_string(n));
        for (double r : parse_range(a.range)) {
            Vector x = Vector::Zero(n);
            x[a.axis - 1] = r;
            xs.push_back(std::move(x));
        }
    } else {
        xs = points_from_json(read_json_file(a.points));
        for (const auto& x : xs)
            if (x.size() != n) throw ParseError("points: coordinate count differs from n");
    }

    std::vector<double> values(xs.size());
    if (body) {
        const auto grid = laplace_grid(*body, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) values[i] = grid[i].value;
    } else {
        parallel_for(xs.size(), [&](std::size_t i) { values[i] = detail::transform_step_unchecked(*step, *h, xs[i]); });
    }

    OutputSink sink(a.out, out);
    auto& os = sink.stream();
    for (int i = 1; i <= n; ++i) os << "x_" << i << ',';
    os << "value\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (int k = 0; k < n; ++k) os << format_number(xs[i][k]) << ',';
        os << format_number(values[i]) << '\n';
    }
    return kOk;
}

inline int run_verify(const VerifyArgs& a, std::ostream& out) {
    SuiteConfig cfg{a.n, a.seed, a.tol, a.oracle_n};
    SuiteOutcome outcome;
    try {
        outcome = run_suite(a.suite, cfg);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    } catch (const SizeLimitError& e) {
        throw ParseError(e.what());
    }
    OutputSink sink(a.out, out);
    sink.stream() << outcome.report.dump(2) << '\n';
    return outcome.passed ? kOk : kCheckFailed;
}

inline Json map_json(const LinearMap& phi) {
    return {{"matrix", matrix_to_json(phi.matrix())}, {"det", phi.det()}};
}

inline int run_dissect(const DissectArgs& a, std::ostream& out) {
    Json doc{{"kind", a.kind}};
    Json bodies = Json::array();
    try {
        if (a.kind == "order-simplices") {
            doc["n"] = a.n;
            Json maps = Json::array();
            for (const auto& s : cube_order_simplices(a.n)) {
                bodies.push_back(body_to_json(Polytope::from_simplex(s)));
                maps.push_back(map_json(s.linear_part()));
            }
            doc["maps"] = std::move(maps);
        } else if (a.kind == "lattice") {
            doc["n"] = a.n;
            doc["m"] = a.m;
            Json shifts = Json::array(), levels = Json::array();
            for (const auto& p : lattice_decomposition(a.m, a.n)) {
                bodies.push_back(body_to_json(p.body));
                shifts.push_back(vector_to_json(p.shift));
                levels.push_back(p.j);
            }
            doc["shifts"] = std::move(shifts);
            doc["j"] = std::move(levels);
        } else if (a.kind == "split") {
            doc["n"] = a.n;
            doc["lambda"] = a.lambda;
            const auto s = split_simplex(a.n, a.lambda);
            bodies.push_back(body_to_json(s.piece_minus));
            bodies.push_back(body_to_json(s.piece_plus));
            const Hyperplane h = split_hyperplane(a.n, a.lambda);
            doc["hyperplane"] = {{"normal", vector_to_json(h.normal)}, {"offset", h.offset}};
            doc["maps"] = Json::array({map_json(s.phi1), map_json(s.phi2)});
        } else if (a.kind == "m-piece") {
            doc["n"] = a.n;
            doc["k"] = a.k;
            bodies.push_back(body_to_json(m_piece(a.k, a.n)));
        } else {
            throw ParseError("unknown dissection kind '" + a.kind + "'");
        }
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    } catch (const SizeLimitError& e) {
        throw ParseError(e.what());
    }
    doc["bodies"] = std::move(bodies);
    OutputSink sink(a.out, out);
    sink.stream() << doc.dump(2) << '\n';
    return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Laplace transforms of polytopes and step functions, with property checks"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "evaluate L at grid points, CSV output");
    transform->add_option("--body", ta.body, "body JSON file");
    transform->add_option("--step", ta.step, "step function JSON file");
    transform->add_option("--h", ta.h, "growth function: identity, saturate, scaled:<c>, sqrtsign, affine1");
    transform->add_option("--axis", ta.axis, "1-based axis for --range");
    transform->add_option("--range", ta.range, "a:b:step along --axis");
    transform->add_option("--points", ta.points, "JSON array of points");
    transform->add_option("--out", ta.out, "CSV output path (default stdout)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite, JSON report");
    verify->add_option("--suite", va.suite, "suite name")->required();
    verify->add_option("--n", va.n, "dimension");
    verify->add_option("--seed", va.seed, "random seed");
    verify->add_option("--tol", va.tol, "tolerance");
    verify->add_option("--oracle-n", va.oracle_n, "Monte Carlo samples");
    verify->add_option("--out", va.out, "JSON output path (default stdout)");

    DissectArgs da;
    auto* dissect = app.add_subcommand("dissect", "emit a dissection as JSON");
    dissect->add_option("--kind", da.kind, "order-simplices | lattice | split | m-piece")->required();
    dissect->add_option("--n", da.n, "dimension");
    dissect->add_option("--m", da.m, "dilation for lattice");
    dissect->add_option("--k", da.k, "k for m-piece");
    dissect->add_option("--lambda", da.lambda, "split parameter in (0,1)");
    dissect->add_option("--out", da.out, "JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kConfigError;
    }

    try {
        if (*transform) return run_transform(ta, out);
        if (*verify) return run_verify(va, out);
        return run_dissect(da, out);
    } catch (const DegenerateInput& e) {
        err << "lapval: degenerate input: " << e.what() << '\n';
        return kDegenerate;
    } catch (const Error& e) {
        err << "lapval: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace lapval::cli
