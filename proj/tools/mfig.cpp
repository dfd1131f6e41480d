// Command-line front end for the mfig toolkit.
//
// Subcommands: curvature, two-point, geodesic, flow, lsi, costa,
// product-check. Every run echoes its configuration into the JSON report so
// a report is reproducible from itself; identical config + seed produces
// byte-identical output. Exit codes: 0 success, 1 numeric/check failure,
// 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mfig/mfig.hpp"

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Doubles go into JSON as numbers; non-finite values as strings, since the
// JSON grammar has no literal for them and null would lose the sign.
json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0.0 ? "inf" : "-inf";
}

json vec(const mfig::Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
    return a;
}

void write_report(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mfig::config_error("out: cannot open '" + out_path + "' for writing");
    out << report.dump(2) << '\n';
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mfig::config_error("csv: cannot open '" + path + "' for writing");
    return out;
}

// ----- shared option bundle -----

struct CommonOptions {
    std::string graph = "k2";
    std::string mean = "logarithmic";
    std::string energy = "shannon";
    std::uint64_t seed = 2026;
    std::string out;
    std::string csv;
    double margin = 1e-4;
    double tol = -1.0; // <0: use the subcommand default
};

void add_graph_flag(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--graph", o.graph, "Graph spec: k<n>|path<n>|cycle<n>|q<d>|file:<path>")
        ->capture_default_str();
}
void add_mean_flag(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--mean", o.mean, "Mean: arithmetic|geometric|logarithmic|spectral|tim|tim:C=<float>")
        ->capture_default_str();
}
void add_energy_flag(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--energy", o.energy, "Energy: shannon|quadratic|<json>|file:<path>")->capture_default_str();
}
void add_output_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", o.out, "Write the JSON report here instead of stdout");
    cmd->add_option("--margin", o.margin, "Boundary margin for simplex searches")->capture_default_str();
    cmd->add_option("--tol", o.tol, "Pass tolerance (subcommand-specific default)");
}

mfig::Energy parse_energy(const std::string& spec) {
    if (spec == "shannon") return mfig::Energy::shannon();
    if (spec == "quadratic") return mfig::Energy::entropy(mfig::EntropyKind::quadratic);
    std::string text = spec;
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw mfig::config_error("energy: cannot open '" + spec.substr(5) + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw mfig::config_error(std::string("energy: not a known name and not valid JSON (") + e.what() + ")");
    }
    return mfig::Energy::from_json(j);
}

json config_echo(const CommonOptions& o, const mfig::Energy& energy) {
    json cfg;
    cfg["graph"] = o.graph;
    cfg["mean"] = o.mean;
    cfg["energy"] = energy.to_json();
    cfg["seed"] = o.seed;
    cfg["margin"] = num(o.margin);
    return cfg;
}

double tol_or(const CommonOptions& o, double fallback) { return o.tol >= 0.0 ? o.tol : fallback; }

// ----- curvature -----

struct CurvatureArgs {
    CommonOptions common;
    std::vector<double> at;
    bool global = false;
    bool constant = false;
    int samples = 64;
    int multistarts = 16;
    int grid = 33;
    bool no_sweep = false;
};

int run_curvature(const CurvatureArgs& a) {
    const mfig::Graph g = mfig::build_standard(a.common.graph);
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Mean mean = mfig::mean_from_string(a.common.mean, &energy);

    json report;
    report["command"] = "curvature";
    report["config"] = config_echo(a.common, energy);

    if (!a.at.empty()) {
        mfig::Vector p(static_cast<Eigen::Index>(a.at.size()));
        for (std::size_t i = 0; i < a.at.size(); ++i) p[static_cast<Eigen::Index>(i)] = a.at[i];
        const mfig::LocalCurvature lc = mfig::local_curvature(g, mean, energy, p);
        report["config"]["at"] = vec(p);
        report["local"] = {{"kappa", num(lc.kappa)},
                           {"residual", num(lc.residual)},
                           {"scale", num(lc.scale)},
                           {"spectrum", vec(lc.spectrum)}};
    } else if (a.constant) {
        const mfig::ConstantCurvatureReport cc =
            mfig::constant_curvature_check(g, mean, energy, a.samples, a.common.seed, tol_or(a.common, 1e-8));
        report["config"]["samples"] = a.samples;
        report["constant"] = {{"constant", cc.constant},
                              {"max_value", num(cc.max_value)},
                              {"min_value", num(cc.min_value)},
                              {"spread", num(cc.spread)},
                              {"value", num(cc.value)}};
    } else {
        mfig::GlobalCurvatureOptions opts;
        opts.margin = a.common.margin;
        opts.seed = a.common.seed;
        opts.multistarts = a.multistarts;
        opts.grid_per_dim = a.grid;
        opts.divergence_sweep = !a.no_sweep;
        const mfig::GlobalCurvature gc = mfig::global_curvature(g, mean, energy, opts);
        json sweep = json::array();
        for (std::size_t i = 0; i < gc.sweep_margins.size(); ++i)
            sweep.push_back({{"margin", num(gc.sweep_margins[i])}, {"value", num(gc.sweep_values[i])}});
        report["global"] = {{"argmin", vec(gc.argmin)},
                            {"diverging", gc.diverging},
                            {"kappa0", num(gc.kappa)},
                            {"sweep", sweep}};
    }
    write_report(report, a.common.out);
    return 0;
}

// ----- two-point -----

struct TwoPointArgs {
    CommonOptions common;
    std::vector<double> distance;
    bool efct = false;
    int kappa_grid = 0;
};

int run_two_point(const TwoPointArgs& a) {
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Mean mean = mfig::mean_from_string(a.common.mean, &energy);
    const mfig::TwoPointProblem prob(mean, energy);

    mfig::QuadratureOptions quad;
    quad.abs_tol = tol_or(a.common, 1e-9);

    json report;
    report["command"] = "two-point";
    report["config"] = config_echo(a.common, energy);
    report["config"].erase("graph"); // always the two-point space

    if (!a.distance.empty()) {
        const double x1 = a.distance[0], x2 = a.distance[1];
        const double lo = std::min(x1, x2), hi = std::max(x1, x2);
        const double d = mfig::transport_distance(prob, lo, hi, quad);
        report["config"]["distance"] = {num(x1), num(x2)};
        report["distance"] = num(d);
    } else if (a.efct) {
        mfig::GlobalCurvatureOptions opts;
        opts.margin = a.common.margin;
        opts.seed = a.common.seed;
        const mfig::Effectiveness e = mfig::effectiveness(prob, opts, quad);
        report["config"]["efct"] = true;
        report["efct"] = {{"diverging", e.diverging},
                          {"distance", num(e.distance)},
                          {"gap", num(e.gap)},
                          {"kappa_min", num(e.kappa_min)},
                          {"value", num(e.value)}};
    } else if (a.kappa_grid > 0) {
        report["config"]["kappa_grid"] = a.kappa_grid;
        double best_x = 0.0;
        double best_k = std::numeric_limits<double>::infinity();
        json grid = json::array();
        std::ofstream csv;
        if (!a.common.csv.empty()) {
            csv = open_csv(a.common.csv);
            csv << "x,kappa\n";
        }
        for (int k = 1; k <= a.kappa_grid; ++k) {
            const double x = static_cast<double>(k) / (a.kappa_grid + 1);
            const double kap = mfig::kappa_k2(prob, x);
            if (kap < best_k) {
                best_k = kap;
                best_x = x;
            }
            if (csv.is_open()) csv << fmt(x) << ',' << fmt(kap) << '\n';
            else grid.push_back({num(x), num(kap)});
        }
        report["kappa_grid"] = {{"argmin_x", num(best_x)}, {"min_kappa", num(best_k)}, {"points", a.kappa_grid}};
        if (!csv.is_open()) report["kappa_grid"]["values"] = grid;
    } else {
        throw mfig::config_error("two-point: choose one of --distance, --efct, --kappa-grid");
    }
    write_report(report, a.common.out);
    return 0;
}

// ----- geodesic -----

struct GeodesicArgs {
    CommonOptions common;
    std::string p0;
    std::string f0;
    double t_end = 1.0;
    double step = 1e-3;
    double floor = 1e-6;
};

int run_geodesic(const GeodesicArgs& a) {
    const mfig::Graph g = mfig::build_standard(a.common.graph);
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Mean mean = mfig::mean_from_string(a.common.mean, &energy);
    const mfig::Vector p0 = mfig::parse_csv_vector(a.p0, "p0");
    const mfig::Vector f0 = mfig::parse_csv_vector(a.f0, "f0");
    if (p0.size() != g.n) throw mfig::config_error("p0: expected " + std::to_string(g.n) + " entries");
    if (f0.size() != g.n) throw mfig::config_error("f0: expected " + std::to_string(g.n) + " entries");
    energy.check_size(g.n, "geodesic");

    const mfig::GeodesicTrajectory traj = mfig::integrate_geodesic(g, mean, p0, f0, a.t_end, a.step, a.floor);

    if (!a.common.csv.empty()) {
        std::ofstream csv = open_csv(a.common.csv);
        csv << "t";
        for (int i = 0; i < g.n; ++i) csv << ",p" << (i + 1);
        for (int i = 0; i < g.n; ++i) csv << ",f" << (i + 1);
        csv << ",gamma1,E\n";
        for (const auto& s : traj.states) {
            csv << fmt(s.t);
            for (int i = 0; i < g.n; ++i) csv << ',' << fmt(s.p[i]);
            for (int i = 0; i < g.n; ++i) csv << ',' << fmt(s.f[i]);
            csv << ',' << fmt(mfig::gamma1(g, mean, s.p, s.f)) << ',' << fmt(energy.value(s.p)) << '\n';
        }
    }

    const mfig::GeodesicState& last = traj.states.back();
    json report;
    report["command"] = "geodesic";
    report["config"] = config_echo(a.common, energy);
    report["config"]["p0"] = vec(p0);
    report["config"]["f0"] = vec(f0);
    report["config"]["t_end"] = num(a.t_end);
    report["config"]["step"] = num(a.step);
    report["result"] = {{"boundary_stopped", traj.boundary_stopped},
                        {"final_gamma1", num(mfig::gamma1(g, mean, last.p, last.f))},
                        {"final_p", vec(last.p)},
                        {"final_t", num(last.t)},
                        {"initial_gamma1", num(mfig::gamma1(g, mean, p0, f0))},
                        {"speed_drift", num(mfig::speed_drift(g, mean, traj))}};
    write_report(report, a.common.out);
    return 0;
}

// ----- flow -----

struct FlowArgs {
    CommonOptions common;
    std::string p0;
    double t_end = 1.0;
    double step = 1e-3;
    std::string convention = "full";
    double rate = std::numeric_limits<double>::quiet_NaN();  // entropy-power rate
    double kappa = std::numeric_limits<double>::quiet_NaN(); // dissipation certificate
};

void write_flow_csv(const mfig::FlowTrace& tr, int n, const std::string& path) {
    std::ofstream csv = open_csv(path);
    csv << "t";
    for (int i = 0; i < n; ++i) csv << ",p" << (i + 1);
    csv << ",E,I,J,N\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        csv << fmt(tr.times[k]);
        for (int i = 0; i < n; ++i) csv << ',' << fmt(tr.states[k][i]);
        csv << ',' << fmt(tr.energy[k]) << ',' << fmt(tr.fisher[k]) << ',' << fmt(tr.dissipation[k]) << ','
            << (tr.entropy_power.empty() ? "nan" : fmt(tr.entropy_power[k])) << '\n';
    }
}

int run_flow(const FlowArgs& a) {
    const mfig::Graph g = mfig::build_standard(a.common.graph);
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Mean mean = mfig::mean_from_string(a.common.mean, &energy);
    const mfig::Vector p0 = mfig::parse_csv_vector(a.p0, "p0");
    if (p0.size() != g.n) throw mfig::config_error("p0: expected " + std::to_string(g.n) + " entries");

    mfig::FlowOptions opts;
    if (a.convention == "full") opts.convention = mfig::FlowConvention::full;
    else if (a.convention == "half") opts.convention = mfig::FlowConvention::half;
    else throw mfig::config_error("convention: expected 'full' or 'half'");
    if (!std::isnan(a.rate)) opts.entropy_power_rate = a.rate;

    const mfig::FlowTrace tr = mfig::gradient_flow(g, mean, energy, p0, a.t_end, a.step, opts);
    if (!a.common.csv.empty()) write_flow_csv(tr, g.n, a.common.csv);

    json report;
    report["command"] = "flow";
    report["config"] = config_echo(a.common, energy);
    report["config"]["p0"] = vec(p0);
    report["config"]["t_end"] = num(a.t_end);
    report["config"]["step"] = num(a.step);
    report["config"]["convention"] = a.convention;
    report["result"] = {{"boundary_stopped", tr.boundary_stopped},
                        {"equilibrium", vec(tr.equilibrium_state)},
                        {"equilibrium_energy", num(tr.equilibrium_energy)},
                        {"final_energy", num(tr.energy.back())},
                        {"final_fisher", num(tr.fisher.back())},
                        {"final_p", vec(tr.states.back())},
                        {"steps", tr.times.size()}};

    int code = 0;
    if (!std::isnan(a.kappa)) {
        const mfig::DissipationReport d = mfig::dissipation_certificate(tr, a.kappa, tol_or(a.common, 1e-9));
        report["dissipation"] = {{"energy_bound_pass", d.energy_bound_pass},
                                 {"gamma_bound_pass", d.gamma_bound_pass},
                                 {"kappa", num(d.kappa)},
                                 {"worst_energy_slack", num(d.worst_energy_slack)},
                                 {"worst_gamma_slack", num(d.worst_gamma_slack)}};
        if (!d.energy_bound_pass || !d.gamma_bound_pass) code = 1;
    }
    write_report(report, a.common.out);
    return code;
}

// ----- lsi -----

struct LsiArgs {
    CommonOptions common;
    double kappa = std::numeric_limits<double>::quiet_NaN();
    int samples = 10000;
    double t_end = 0.0; // accepted for interface uniformity with flow/costa
    double step = 0.0;  // accepted for interface uniformity with flow/costa
};

int run_lsi(const LsiArgs& a) {
    const mfig::Graph g = mfig::build_standard(a.common.graph);
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Mean mean = mfig::mean_from_string(a.common.mean, &energy);

    double kappa = a.kappa;
    std::string kappa_source = "given";
    json sweep = json::array();
    if (std::isnan(kappa)) {
        mfig::GlobalCurvatureOptions opts;
        opts.margin = a.common.margin;
        opts.seed = a.common.seed;
        const mfig::GlobalCurvature gc = mfig::global_curvature(g, mean, energy, opts);
        kappa = gc.kappa;
        kappa_source = "computed";
    }

    const mfig::LogSobolevReport r =
        mfig::log_sobolev_check(g, mean, energy, kappa, a.samples, a.common.seed, 1e-4, tol_or(a.common, 1e-9));

    json report;
    report["command"] = "lsi";
    report["config"] = config_echo(a.common, energy);
    report["config"]["samples"] = a.samples;
    report["result"] = {{"degenerate", r.degenerate},
                        {"kappa", num(r.kappa)},
                        {"kappa_source", kappa_source},
                        {"pass", r.pass},
                        {"samples", r.samples},
                        {"worst_ratio", num(r.worst_ratio)},
                        {"worst_slack", num(r.worst_slack)}};
    write_report(report, a.common.out);
    return r.pass ? 0 : 1;
}

// ----- costa -----

struct CostaArgs {
    CommonOptions common;
    std::string p0;
    double t_end = 1.0;
    double step = 1e-3;
};

int run_costa(const CostaArgs& a) {
    const mfig::Graph g = mfig::build_standard(a.common.graph);
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Vector p0 = mfig::parse_csv_vector(a.p0, "p0");
    if (p0.size() != g.n) throw mfig::config_error("p0: expected " + std::to_string(g.n) + " entries");

    mfig::GlobalCurvatureOptions search;
    search.margin = a.common.margin;
    search.seed = a.common.seed;
    const mfig::EntropyPowerReport r = mfig::costa_check(g, energy, p0, a.t_end, a.step, search, tol_or(a.common, 1e-7));
    if (!a.common.csv.empty()) write_flow_csv(r.trace, g.n, a.common.csv);

    json report;
    report["command"] = "costa";
    report["config"] = config_echo(a.common, energy);
    report["config"].erase("mean"); // derived from the energy, not configurable
    report["config"]["p0"] = vec(p0);
    report["config"]["t_end"] = num(a.t_end);
    report["config"]["step"] = num(a.step);
    report["result"] = {{"argmin", vec(r.argmin)},
                        {"compatibility_residual", num(r.compatibility_residual)},
                        {"concavity_pass", r.concavity_pass},
                        {"m_inverse", num(r.m_inverse)},
                        {"worst_second_difference", num(r.worst_second_difference)}};
    write_report(report, a.common.out);
    return r.concavity_pass ? 0 : 1;
}

// ----- product-check -----

struct ProductArgs {
    CommonOptions common;
    std::string g = "k2";
    std::string h = "k2";
};

int run_product_check(const ProductArgs& a) {
    const mfig::Graph g = mfig::build_standard(a.g);
    const mfig::Graph h = mfig::build_standard(a.h);
    const mfig::Energy energy = parse_energy(a.common.energy);
    const mfig::Mean mean = mfig::mean_from_string(a.common.mean, &energy);

    mfig::GlobalCurvatureOptions opts;
    opts.margin = a.common.margin;
    opts.seed = a.common.seed;
    const mfig::ProductBoundReport r =
        mfig::product_bound_check(g, h, mean, energy, opts, tol_or(a.common, 1e-6));

    // Exactness of the fiber + 4-cycle bookkeeping at one seeded sample.
    const mfig::Graph product = mfig::cartesian_product(g, h);
    mfig::Rng rng(a.common.seed);
    const mfig::Vector p = mfig::sample_simplex(rng, product.n, 1e-3);
    mfig::Vector f(product.n);
    for (int i = 0; i < product.n; ++i) f[i] = rng.uniform(-1.0, 1.0);
    const double decomp = mfig::product_decomposition_residual(g, h, mean, energy, p, f);

    json report;
    report["command"] = "product-check";
    report["config"] = config_echo(a.common, energy);
    report["config"].erase("graph");
    report["config"]["g"] = a.g;
    report["config"]["h"] = a.h;
    report["result"] = {{"decomposition_residual", num(decomp)},
                        {"kappa_g", num(r.kappa_g)},
                        {"kappa_h", num(r.kappa_h)},
                        {"kappa_product", num(r.kappa_product)},
                        {"pass", r.pass},
                        {"slack", num(r.slack)}};
    write_report(report, a.common.out);
    return r.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature, transport distance, and entropy-dissipation toolkit for energies on probability "
                 "simplices over finite graphs"};
    app.require_subcommand(1);

    CurvatureArgs curvature;
    TwoPointArgs two_point;
    GeodesicArgs geodesic;
    FlowArgs flow;
    LsiArgs lsi;
    CostaArgs costa;
    ProductArgs product;

    {
        CLI::App* c = app.add_subcommand("curvature", "Local spectrum or global minimum of the curvature ratio");
        add_graph_flag(c, curvature.common);
        add_mean_flag(c, curvature.common);
        add_energy_flag(c, curvature.common);
        add_output_flags(c, curvature.common);
        c->add_option("--at", curvature.at, "Evaluate the local curvature at this point (csv)")->delimiter(',');
        c->add_flag("--global", curvature.global, "Minimize the curvature ratio over the interior (default)");
        c->add_flag("--constant", curvature.constant, "Test whether the curvature is constant over samples");
        c->add_option("--samples", curvature.samples, "Samples for --constant")->capture_default_str();
        c->add_option("--multistarts", curvature.multistarts, "Descent starts for the global search")
            ->capture_default_str();
        c->add_option("--grid", curvature.grid, "Grid resolution per dimension (n <= 4)")->capture_default_str();
        c->add_flag("--no-sweep", curvature.no_sweep, "Skip the shrinking-margin divergence sweep");
    }
    {
        CLI::App* c = app.add_subcommand("two-point", "Distances, curvature profiles, and bound effectiveness "
                                                      "on the two-point space");
        add_mean_flag(c, two_point.common);
        add_energy_flag(c, two_point.common);
        add_output_flags(c, two_point.common);
        c->add_option("--distance", two_point.distance, "Transport distance between two points of [0,1]")
            ->expected(2);
        c->add_flag("--efct", two_point.efct, "Effectiveness of the curvature upper bound");
        c->add_option("--kappa-grid", two_point.kappa_grid, "Tabulate kappa at N interior grid points");
        c->add_option("--csv", two_point.common.csv, "Write the kappa grid as CSV (x, kappa)");
    }
    {
        CLI::App* c = app.add_subcommand("geodesic", "Integrate the transport geodesic equations");
        add_graph_flag(c, geodesic.common);
        add_mean_flag(c, geodesic.common);
        add_energy_flag(c, geodesic.common);
        add_output_flags(c, geodesic.common);
        c->add_option("--p0", geodesic.p0, "Initial distribution (csv)")->required();
        c->add_option("--f0", geodesic.f0, "Initial potential (csv)")->required();
        c->add_option("--t-end", geodesic.t_end, "Integration horizon")->capture_default_str();
        c->add_option("--step", geodesic.step, "Time step")->capture_default_str();
        c->add_option("--floor", geodesic.floor, "Stop when a coordinate falls below this")->capture_default_str();
        c->add_option("--csv", geodesic.common.csv, "Write the trajectory as CSV (t, p, f, gamma1, E)");
    }
    {
        CLI::App* c = app.add_subcommand("flow", "Integrate the energy gradient flow");
        add_graph_flag(c, flow.common);
        add_mean_flag(c, flow.common);
        add_energy_flag(c, flow.common);
        add_output_flags(c, flow.common);
        c->add_option("--p0", flow.p0, "Initial distribution (csv)")->required();
        c->add_option("--t-end", flow.t_end, "Integration horizon")->capture_default_str();
        c->add_option("--step", flow.step, "Time step")->capture_default_str();
        c->add_option("--convention", flow.convention, "Flow speed convention: full|half")->capture_default_str();
        c->add_option("--rate", flow.rate, "Also record the entropy power exp(-2 E(t) * rate)");
        c->add_option("--kappa", flow.kappa, "Certify exponential dissipation at this rate");
        c->add_option("--csv", flow.common.csv, "Write the trace as CSV (t, p, E, I, J, N)");
    }
    {
        CLI::App* c = app.add_subcommand("lsi", "Check the curvature functional inequality over random states");
        add_graph_flag(c, lsi.common);
        add_mean_flag(c, lsi.common);
        add_energy_flag(c, lsi.common);
        add_output_flags(c, lsi.common);
        c->add_option("--kappa", lsi.kappa, "Curvature constant (default: computed global minimum)");
        c->add_option("--samples", lsi.samples, "Number of sampled states")->capture_default_str();
        c->add_option("--t-end", lsi.t_end, "Accepted for uniformity with flow/costa; unused");
        c->add_option("--step", lsi.step, "Accepted for uniformity with flow/costa; unused");
    }
    {
        CLI::App* c = app.add_subcommand("costa", "Entropy-power concavity along the heat flow");
        add_graph_flag(c, costa.common);
        add_energy_flag(c, costa.common);
        add_output_flags(c, costa.common);
        c->add_option("--p0", costa.p0, "Initial distribution (csv)")->required();
        c->add_option("--t-end", costa.t_end, "Integration horizon")->capture_default_str();
        c->add_option("--step", costa.step, "Time step")->capture_default_str();
        c->add_option("--csv", costa.common.csv, "Write the trace as CSV (t, p, E, I, J, N)");
    }
    {
        CLI::App* c = app.add_subcommand("product-check", "Curvature bound for a Cartesian product of graphs");
        c->set_help_flag("--help", "Print this help message and exit"); // frees -h for the --h factor flag
        add_mean_flag(c, product.common);
        add_energy_flag(c, product.common);
        add_output_flags(c, product.common);
        c->add_option("--g", product.g, "First factor graph spec")->capture_default_str();
        c->add_option("--h", product.h, "Second factor graph spec")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("curvature")) return run_curvature(curvature);
        if (app.got_subcommand("two-point")) return run_two_point(two_point);
        if (app.got_subcommand("geodesic")) return run_geodesic(geodesic);
        if (app.got_subcommand("flow")) return run_flow(flow);
        if (app.got_subcommand("lsi")) return run_lsi(lsi);
        if (app.got_subcommand("costa")) return run_costa(costa);
        if (app.got_subcommand("product-check")) return run_product_check(product);
    } catch (const mfig::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const mfig::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
