#include "saddlerate/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "saddlerate/capacity.hpp"
#include "saddlerate/kramers.hpp"
#include "saddlerate/landscape.hpp"
#include "saddlerate/potentials.hpp"
#include "saddlerate/scenarios.hpp"
#include "saddlerate/sde.hpp"
#include "saddlerate/special_functions.hpp"

namespace saddlerate {

namespace {

using nlohmann::json;

struct CliFailure : std::runtime_error {
    CliFailure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    int code;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const {
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& cells) {
            for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
            os << "\n";
        };
        line(header);
        for (const auto& r : rows) line(r);
        return os.str();
    }
};

struct Output {
    json doc;
    Table table;
    std::vector<std::pair<std::string, std::string>> files;  // extra raw data, name -> content
    int code = kExitOk;
};

struct Globals {
    std::string potential;
    std::vector<std::string> params;
    std::vector<double> eps;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string format = "json";
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Vec parse_vec(const std::string& text) {
    std::vector<double> vals;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw std::invalid_argument("not a number: '" + item + "'");
        vals.push_back(v);
    }
    if (vals.empty()) throw std::invalid_argument("empty coordinate list");
    return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::vector<std::pair<std::string, double>> parse_params(const std::vector<std::string>& items) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& group : items) {
        std::istringstream is(group);
        std::string kv;
        while (std::getline(is, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw std::invalid_argument("parameter must be key=value: " + kv);
            out.emplace_back(kv.substr(0, eq), parse_vec(kv.substr(eq + 1))(0));
        }
    }
    return out;
}

PotentialModel load_potential(const Globals& g) {
    if (g.potential.empty()) throw std::invalid_argument("--potential is required");
    const auto params = parse_params(g.params);
    if (std::filesystem::is_regular_file(g.potential)) {
        std::ifstream in(g.potential);
        json j = json::parse(in);
        for (const auto& [k, v] : params) {
            if (k == "N") j[k] = static_cast<int>(std::lround(v));
            else j[k] = v;
        }
        return model_from_json(j);
    }
    return model_from_name(g.potential, params);
}

void check_dim(const PotentialModel& m, const Vec& x, const char* what) {
    if (x.size() != m.dim())
        throw std::invalid_argument(std::string(what) + " has " + std::to_string(x.size()) +
                                    " coordinates, the potential has dimension " + std::to_string(m.dim()));
}

void require_eps(const Globals& g) {
    if (g.eps.empty()) throw std::invalid_argument("--eps is required");
    for (double e : g.eps)
        if (!(e > 0.0)) throw std::invalid_argument("eps values must be positive");
}

StationaryPoint converge(const PotentialModel& m, const Vec& seed, const char* what) {
    check_dim(m, seed, what);
    try {
        return refine_stationary_point(m, seed);
    } catch (const std::runtime_error& e) {
        throw CliFailure(kExitNoConvergence, std::string(what) + ": " + e.what());
    }
}

std::vector<double> grid(double from, double to, int points) {
    if (points < 1) throw std::invalid_argument("--points must be positive");
    if (points == 1) return {from};
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = from + (to - from) * i / (points - 1);
    return v;
}

// classify

struct ClassifyArgs {
    std::vector<std::string> points;
    double grad_tol = 1e-10;
    double zero_tol = 1e-6;
    double coeff_tol = 1e-8;
    bool probe = false;
};

Output cmd_classify(const Globals& g, const ClassifyArgs& a) {
    if (a.points.empty()) throw std::invalid_argument("classify needs at least one --point");
    const PotentialModel model = load_potential(g);
    std::vector<Vec> seeds;
    for (const auto& p : a.points) {
        seeds.push_back(parse_vec(p));
        check_dim(model, seeds.back(), "--point");
    }
    const StationarySearch search = find_stationary_points(model, seeds, a.grad_tol);
    if (search.points.empty()) throw CliFailure(kExitNoConvergence, "no seed converged to a stationary point");

    ClassifyOptions opt;
    opt.zero_tol_factor = a.zero_tol;
    opt.coeff_tol = a.coeff_tol;
    opt.probe_higher_order = a.probe;
    Output o;
    o.table.header = {"seed_index", "location", "value", "tag", "verdict"};
    json pts = json::array();
    for (const auto& p : search.points) {
        const Classification c = classify(model, p.location, opt);
        json j = c.to_json();
        j["seed_index"] = p.seed_index;
        j["gradient_norm"] = p.gradient_norm;
        j["iterations"] = p.iterations;
        pts.push_back(j);
        std::string loc;
        for (Eigen::Index i = 0; i < p.location.size(); ++i) loc += (i ? ";" : "") + num(p.location(i));
        o.table.rows.push_back({std::to_string(p.seed_index), loc, num(c.value), to_string(c.tag), to_string(c.verdict)});
    }
    json fails = json::array();
    for (const auto& f : search.failures) fails.push_back({{"seed_index", f.seed_index}, {"reason", f.reason}});
    o.doc = {{"command", "classify"}, {"points", pts}, {"failures", fails}};
    return o;
}

// rate

struct RateArgs {
    std::string min_seed;
    std::string saddle_seed;
};

struct Prediction {
    MinimumSpec min;
    Classification saddle;
    SaddleSpec spec;
};

Prediction predict(const PotentialModel& model, const Vec& min_seed, const Vec& saddle_seed) {
    const StationaryPoint pm = converge(model, min_seed, "minimum seed");
    const Classification cm = classify(model, pm.location);
    if (cm.tag != CriticalTag::LocalMinimum)
        throw std::invalid_argument("minimum seed converged to a " + to_string(cm.tag) + " point");
    const StationaryPoint ps = converge(model, saddle_seed, "saddle seed");
    Prediction p;
    p.min = minimum_from_point(model, pm.location);
    p.saddle = classify(model, ps.location);
    p.spec = saddle_spec_from_classification(p.saddle);
    return p;
}

Output cmd_rate(const Globals& g, const RateArgs& a) {
    require_eps(g);
    const PotentialModel model = load_potential(g);
    const Prediction p = predict(model, parse_vec(a.min_seed), parse_vec(a.saddle_seed));
    Output o;
    o.table.header = {"eps", "barrier", "prefactor", "expected_time", "capacity", "regime_tag", "error_order"};
    json results = json::array();
    for (double eps : g.eps) {
        const RateResult r = ek_rate(p.min, p.spec, eps);
        results.push_back(r.to_json());
        o.table.rows.push_back({num(eps), num(r.barrier), num(r.prefactor), num(r.expected_time), num(r.capacity),
                                r.regime_tag, r.error_order});
    }
    o.doc = {{"command", "rate"},
             {"minimum", {{"value", p.min.value}, {"hessian_det", p.min.hessian_det}, {"eigenvalues", p.min.eigenvalues}}},
             {"saddle", p.saddle.to_json()},
             {"results", results}};
    return o;
}

// sweep

struct SweepArgs {
    std::string scenario;
    double from = -1.0;
    double to = 1.0;
    int points = 81;
    std::vector<double> values;
    int chain_size = 3;
};

Output cmd_sweep(const Globals& g, const SweepArgs& a) {
    require_eps(g);
    const Scenario s = scenario_from_name(a.scenario);
    const std::vector<double> controls = a.values.empty() ? grid(a.from, a.to, a.points) : a.values;
    const auto rows = sweep(s, controls, g.eps, a.chain_size);
    Output o;
    o.table.header = {"control_parameter", "eps", "barrier", "prefactor", "expected_time", "regime_tag", "error_order"};
    json arr = json::array();
    for (const auto& r : rows) {
        json j = r.rate.to_json();
        j["control_parameter"] = r.control;
        arr.push_back(j);
        o.table.rows.push_back({num(r.control), num(r.rate.eps), num(r.rate.barrier), num(r.rate.prefactor),
                                num(r.rate.expected_time), r.rate.regime_tag, r.rate.error_order});
    }
    o.doc = {{"command", "sweep"}, {"scenario", scenario_name(s)}, {"rows", arr}};
    if (s == Scenario::DoubleZero || s == Scenario::Sombrero) {
        json h = json::array();
        for (double eps : g.eps) h.push_back({{"eps", eps}, {"relative_discrepancy", handover_discrepancy(a.chain_size, eps)}});
        o.doc["handover"] = h;
    }
    return o;
}

// verify

struct VerifyArgs {
    std::string saddle_seed;
    int panels = 24;
    int order = 8;
};

Output cmd_verify(const Globals& g, const VerifyArgs& a) {
    require_eps(g);
    const PotentialModel model = load_potential(g);
    if (model.dim() > 3) throw std::invalid_argument("verify supports dimension up to 3");
    const StationaryPoint ps = converge(model, parse_vec(a.saddle_seed), "saddle seed");
    const Classification c = classify(model, ps.location);
    const SaddleSpec spec = saddle_spec_from_classification(c);
    const SaddleFrame frame = saddle_frame(model, ps.location);
    const GridSpec gs{a.panels, a.order};
    if (gs.panels < 1 || gs.order < 1) throw std::invalid_argument("grid panels and order must be positive");
    // The capacity does not depend on the minimum; any admissible one will do.
    const MinimumSpec reference{c.value - 1.0, 1.0, {}};

    Output o;
    o.table.header = {"eps", "closed_form", "upper", "lower", "exact", "upper_over_closed", "lower_over_closed", "tol",
                      "ordering_ok", "sandwich_ok"};
    json arr = json::array();
    bool all_ok = true;
    for (double eps : g.eps) {
        const double closed = ek_rate(reference, spec, eps).capacity_scaled;
        const BoxSpec box = default_box(model, frame, eps);
        const CapacityEstimate up = dirichlet_upper_bound(model, frame, eps, box, gs);
        const CapacityEstimate lo = fiber_lower_bound(model, frame, eps, box, gs);
        const double slack = 1e-9 + (up.error_estimate + lo.error_estimate) / up.value;
        const bool ordering = lo.value <= up.value * (1.0 + slack);
        const double tol = 3.0 * std::pow(eps, 0.25) * std::pow(std::abs(std::log(eps)), 1.25);
        const bool sandwich = lo.value <= closed * (1.0 + tol) && closed <= up.value * (1.0 + tol);
        json j = {{"eps", eps},
                  {"closed_form", closed},
                  {"upper", up.to_json()},
                  {"lower", lo.to_json()},
                  {"upper_over_closed", up.value / closed},
                  {"lower_over_closed", lo.value / closed},
                  {"tol", tol},
                  {"ordering_ok", ordering},
                  {"sandwich_ok", sandwich}};
        std::string exact_cell;
        if (model.dim() == 1) {
            const double z = ps.location(0);
            const double sign = frame.axes(0, 0);
            auto v = [&](double t) { return model.value(Vec::Constant(1, z + sign * t)); };
            const CapacityEstimate ex = capacity_1d_exact(v, -box.delta1, box.delta1, eps);
            const double agreement = std::abs(up.value / ex.value - 1.0);
            j["exact"] = ex.to_json();
            j["exact_agreement"] = agreement;
            j["exact_ok"] = agreement <= 1e-8;
            all_ok = all_ok && agreement <= 1e-8;
            exact_cell = num(ex.value);
        }
        all_ok = all_ok && ordering && sandwich;
        arr.push_back(j);
        o.table.rows.push_back({num(eps), num(closed), num(up.value), num(lo.value), exact_cell, num(up.value / closed),
                                num(lo.value / closed), num(tol), ordering ? "true" : "false",
                                sandwich ? "true" : "false"});
    }
    o.doc = {{"command", "verify"}, {"saddle", c.to_json()}, {"regime", ek_rate(reference, spec, g.eps.front()).regime_tag},
             {"results", arr}};
    if (!all_ok) o.code = kExitInvariant;
    return o;
}

// simulate

struct SimulateArgs {
    std::string start;
    std::vector<std::string> targets;
    double radius = 0.0;
    int replicas = 0;
    double dt = 0.0;
    double max_time = 1e4;
    int threads = 0;
    std::string saddle_seed;
    double tol = -1.0;
    double confinement = 1e3;
};

Output cmd_simulate(const Globals& g, const SimulateArgs& a) {
    require_eps(g);
    if (a.replicas < 1) throw std::invalid_argument("--replicas must be positive");
    if (a.targets.empty()) throw std::invalid_argument("simulate needs at least one --target");
    const PotentialModel model = load_potential(g);
    const Vec start = parse_vec(a.start);
    check_dim(model, start, "--start");
    std::vector<Vec> centers;
    for (const auto& t : a.targets) {
        centers.push_back(parse_vec(t));
        check_dim(model, centers.back(), "--target");
    }
    std::optional<Prediction> pred;
    if (!a.saddle_seed.empty()) pred = predict(model, start, parse_vec(a.saddle_seed));

    Output o;
    o.table.header = {"eps", "dt", "mean", "stderr", "hit_count", "censored_count", "aborted_count", "ci95_low",
                      "ci95_high", "expected_time", "ratio", "pass"};
    json arr = json::array();
    for (size_t i = 0; i < g.eps.size(); ++i) {
        const double eps = g.eps[i];
        SimulationConfig cfg;
        cfg.eps = eps;
        cfg.dt = a.dt;
        cfg.max_time = a.max_time;
        cfg.replicas = a.replicas;
        cfg.seed = g.seed;
        cfg.start = start;
        cfg.threads = a.threads;
        cfg.confinement_radius = a.confinement;
        const double radius = a.radius > 0.0 ? a.radius : 3.0 * std::sqrt(eps);
        for (const auto& c : centers) cfg.target.push_back({c, radius});
        const HittingTimeEstimate est = simulate_first_hitting(model, cfg);

        json j = est.to_json();
        j["target_radius"] = radius;
        std::vector<std::string> row = {num(eps), num(est.dt), num(est.mean), num(est.stderr_),
                                        std::to_string(est.hit_count), std::to_string(est.censored_count),
                                        std::to_string(est.aborted_count), num(est.ci95_low), num(est.ci95_high)};
        if (est.censored_fraction() > 0.1) {
            j["error"] = "more than 10% of replicas censored or aborted";
            o.code = kExitInvariant;
            row.insert(row.end(), {"", "", ""});
        } else if (pred) {
            const RateResult r = ek_rate(pred->min, pred->spec, eps);
            const ValidationReport v = validate(est, r, a.tol > 0.0 ? std::optional<double>(a.tol) : std::nullopt);
            j["prediction"] = r.to_json();
            j["validation"] = v.to_json();
            row.insert(row.end(), {num(r.expected_time), num(v.ratio), v.pass ? "true" : "false"});
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        arr.push_back(j);
        o.table.rows.push_back(row);

        Table raw;
        raw.header = {"replica", "tau", "status"};
        for (size_t r = 0; r < est.outcomes.size(); ++r)
            raw.rows.push_back({std::to_string(r), num(est.outcomes[r].tau), to_string(est.outcomes[r].status)});
        o.files.emplace_back("hitting_times_" + std::to_string(i) + ".csv", raw.str());
    }
    o.doc = {{"command", "simulate"}, {"seed", g.seed}, {"replicas", a.replicas}, {"results", arr}};
    return o;
}

// tabulate-special

struct TabulateArgs {
    std::string function;
    double from = 0.0;
    double to = 10.0;
    int points = 101;
    std::string route = "auto";
};

Output cmd_tabulate(const TabulateArgs& a) {
    const Crossover f = crossover_from_name(a.function);
    Route route = Route::Auto;
    if (a.route == "closed_form") route = Route::ClosedForm;
    else if (a.route == "quadrature") route = Route::Quadrature;
    else if (a.route != "auto") throw std::invalid_argument("--route must be auto, closed_form or quadrature");
    Output o;
    o.table.header = {"alpha", "value", "route"};
    json arr = json::array();
    for (double alpha : grid(a.from, a.to, a.points)) {
        const double v = evaluate(f, alpha, route);
        const std::string used = route == Route::Auto ? auto_route_name(alpha) : a.route;
        arr.push_back({{"alpha", alpha}, {"value", v}, {"route", used}});
        o.table.rows.push_back({num(alpha), num(v), used});
    }
    o.doc = {{"command", "tabulate-special"}, {"function", crossover_name(f)}, {"rows", arr}};
    return o;
}

// Arguments without --out, which is where the outputs go rather than what they are.
std::vector<std::string> strip_out(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) continue;
        kept.push_back(args[i]);
    }
    return kept;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
}

int emit(const std::string& command, const std::vector<std::string>& args, const Globals& g, const Output& o,
         std::ostream& out) {
    const std::string primary = g.format == "csv" ? o.table.str() : o.doc.dump(2) + "\n";
    out << primary;
    if (g.out_dir.empty()) return o.code;

    const std::filesystem::path dir(g.out_dir);
    std::filesystem::create_directories(dir);
    const std::string name = command + (g.format == "csv" ? ".csv" : ".json");
    write_file(dir / name, primary);
    json outputs = json::array({name});
    for (const auto& [fname, content] : o.files) {
        write_file(dir / fname, content);
        outputs.push_back(fname);
    }
    json manifest = {{"command", command},
                     {"argv", strip_out(args)},
                     {"potential", g.potential},
                     {"params", g.params},
                     {"eps", g.eps},
                     {"seed", g.seed},
                     {"format", g.format},
                     {"outputs", outputs},
                     {"tool_version", kToolVersion}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return o.code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exit times across degenerate and bifurcating saddles", "saddlerate"};
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    app.add_option("--potential", g.potential, "built-in name (chain, rotated2, double_well) or JSON file");
    app.add_option("--params", g.params, "key=value parameters, comma separated or repeated");
    app.add_option("--eps", g.eps, "noise levels, comma separated")->delimiter(',');
    app.add_option("--out", g.out_dir, "directory for result files and manifest.json");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    ClassifyArgs ca;
    auto* classify_cmd = app.add_subcommand("classify", "locate and classify stationary points");
    classify_cmd->add_option("--point", ca.points, "seed point x1,x2,... (repeatable)")->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    classify_cmd->add_option("--grad-tol", ca.grad_tol);
    classify_cmd->add_option("--zero-tol", ca.zero_tol, "relative zero-eigenvalue threshold");
    classify_cmd->add_option("--coeff-tol", ca.coeff_tol);
    classify_cmd->add_flag("--probe", ca.probe, "probe higher orders when C3 and C4 vanish");

    RateArgs ra;
    auto* rate_cmd = app.add_subcommand("rate", "expected transition time from a minimum across a saddle");
    rate_cmd->add_option("--min-seed", ra.min_seed)->required();
    rate_cmd->add_option("--saddle-seed", ra.saddle_seed)->required();

    SweepArgs sa;
    auto* sweep_cmd = app.add_subcommand("sweep", "prefactor against a bifurcation parameter");
    sweep_cmd->add_option("--scenario", sa.scenario, "transverse, longitudinal, doublezero or sombrero")->required();
    sweep_cmd->add_option("--from", sa.from);
    sweep_cmd->add_option("--to", sa.to);
    sweep_cmd->add_option("--points", sa.points);
    sweep_cmd->add_option("--values", sa.values, "explicit control values")->delimiter(',');
    sweep_cmd->add_option("--N", sa.chain_size, "chain size for doublezero and sombrero");

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "closed-form capacity against quadrature bounds");
    verify_cmd->add_option("--saddle-seed", va.saddle_seed)->required();
    verify_cmd->add_option("--panels", va.panels);
    verify_cmd->add_option("--order", va.order);

    SimulateArgs ma;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo first-hitting times");
    simulate_cmd->add_option("--start", ma.start)->required();
    simulate_cmd->add_option("--target", ma.targets, "ball center (repeatable)")->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    simulate_cmd->add_option("--radius", ma.radius, "target radius, default 3 sqrt(eps)");
    simulate_cmd->add_option("--replicas", ma.replicas)->required();
    simulate_cmd->add_option("--dt", ma.dt, "time step, default min(1e-3, eps/(20 max|lambda|))");
    simulate_cmd->add_option("--max-time", ma.max_time);
    simulate_cmd->add_option("--threads", ma.threads);
    simulate_cmd->add_option("--confinement", ma.confinement);
    simulate_cmd->add_option("--saddle-seed", ma.saddle_seed, "compare against the rate across this saddle");
    simulate_cmd->add_option("--tol", ma.tol, "validation tolerance, default error order + 2 stderr/mean");

    TabulateArgs ta;
    auto* tab_cmd = app.add_subcommand("tabulate-special", "tabulate a crossover function");
    tab_cmd->add_option("--function", ta.function, "psi_plus, psi_minus, theta_plus, theta_minus or chi")->required();
    tab_cmd->add_option("--from", ta.from);
    tab_cmd->add_option("--to", ta.to);
    tab_cmd->add_option("--points", ta.points);
    tab_cmd->add_option("--route", ta.route);

    std::string manifest_path;
    auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay_cmd->add_option("manifest", manifest_path)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*replay_cmd) {
            std::ifstream in(manifest_path);
            if (!in) throw std::invalid_argument("cannot read manifest " + manifest_path);
            const json m = json::parse(in);
            std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
            if (!g.out_dir.empty()) argv.insert(argv.end(), {"--out", g.out_dir});
            return run_cli(argv, out, err);
        }
        std::string command;
        Output o;
        if (*classify_cmd) {
            command = "classify";
            o = cmd_classify(g, ca);
        } else if (*rate_cmd) {
            command = "rate";
            o = cmd_rate(g, ra);
        } else if (*sweep_cmd) {
            command = "sweep";
            o = cmd_sweep(g, sa);
        } else if (*verify_cmd) {
            command = "verify";
            o = cmd_verify(g, va);
        } else if (*simulate_cmd) {
            command = "simulate";
            o = cmd_simulate(g, ma);
        } else {
            command = "tabulate-special";
            o = cmd_tabulate(ta);
        }
        const int code = emit(command, args, g, o, out);
        if (code == kExitInvariant) err << command << ": invariant violated, see report\n";
        return code;
    } catch (const CliFailure& e) {
        err << "error: " << e.what() << "\n";
        return e.code;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    }
}

}  // namespace saddlerate
