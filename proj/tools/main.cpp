#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "concentra/cayley.hpp"
#include "concentra/doubling.hpp"
#include "io.hpp"
#include "sweep.hpp"
#include "verify.hpp"

using namespace concentra;
using namespace concentra::cli;

namespace {

enum Exit { ok = 0, violation = 1, input_error = 2, hypothesis = 3 };

struct Globals {
    std::string input = "-";
    std::string output;
    std::optional<double> kappa;
    std::optional<double> kappa2;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> exact_limit;
    std::string format = "json";
};

Globals g;

std::size_t exact_limit() {
    if (g.exact_limit) return *g.exact_limit;
    if (const char* env = std::getenv("CONCENTRA_EXACT_LIMIT")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0') throw Error(ErrorCode::invalid_input, "CONCENTRA_EXACT_LIMIT must be an integer");
        return v;
    }
    return default_exact_limit;
}

double kappa() {
    if (!g.kappa) throw Error(ErrorCode::invalid_input, "--kappa is required");
    return *g.kappa;
}

json input() { return load_json(g.input); }

void emit_text(const std::string& text) {
    if (g.output.empty() || g.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output);
    if (!out) throw Error(ErrorCode::invalid_input, "cannot write " + g.output);
    out << text;
}

std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// JSON by default; --format csv flattens the top-level fields to key,value rows.
void emit(const json& j) {
    if (g.format == "csv") {
        std::string text = "key,value\n";
        for (const auto& [k, v] : j.items()) {
            if (v.is_object()) {
                for (const auto& [k2, v2] : v.items()) text += k + "." + k2 + "," + (v2.is_structured() ? "\"" + v2.dump() + "\"" : scalar(v2)) + "\n";
            } else {
                text += k + "," + (v.is_structured() ? "\"" + v.dump() + "\"" : scalar(v)) + "\n";
            }
        }
        emit_text(text);
        return;
    }
    emit_text(j.dump(2) + "\n");
}

int verdict(bool holds) { return holds ? ok : violation; }

json certificate_json(const OrbitCertificate& c) {
    json j{{"mode", c.mode}, {"x0", c.x0}, {"bound", c.bound}, {"actual", c.actual}, {"holds", c.holds}};
    if (c.center) j.update({{"center", *c.center}, {"center_bound", c.center_bound}, {"center_actual", c.center_actual}});
    if (!c.grid_diameters.empty()) j["grid_diameters"] = c.grid_diameters;
    return j;
}

DoublingProfile profile_from(const std::optional<double>& constant, const std::optional<double>& measure_c) {
    if (constant) return DoublingProfile::explicit_c(*constant);
    if (measure_c) return DoublingProfile::doubling_measure(*measure_c);
    return DoublingProfile::measured_packing();
}

const FiniteAction& finite_of(const ActionInput& a) {
    if (!a.finite) throw Error(ErrorCode::invalid_input, "a finite action (mm-space with maps) is required");
    return *a.finite;
}

// ---------------------------------------------------------------- commands

int cmd_validate() {
    const json j = input();
    json out{{"valid", true}};
    if (j.contains("group")) {
        const auto a = parse_action(j);
        out["kind"] = a.model ? "model_action" : "finite_action";
        if (a.finite) out.update({{"group_size", a.finite->group().size()}, {"points", a.finite->space().size()}});
        if (a.model) out.update({{"group_size", a.model->group.size()}, {"dim", a.model->space.dim()}});
    } else if (j.contains("generators")) {
        out["kind"] = "group";
        out["group_size"] = parse_generated_group(j).size();
    } else if (j.contains("vertices")) {
        const auto gr = parse_graph(j);
        out.update({{"kind", "graph"}, {"vertices", gr.graph.vertex_count()}, {"edges", gr.graph.edges().size()},
                    {"atoms", gr.atoms.size()}, {"tree", gr.graph.is_tree()}});
    } else if (j.contains("model")) {
        const auto space = parse_model(j);
        const auto nu = parse_model_measure(space, j);
        out.update({{"kind", "model_measure"}, {"points", nu.points.size()}, {"total_mass", nu.total_mass()}});
    } else if (is_line_measure(j)) {
        const auto nu = parse_line_measure(j);
        out.update({{"kind", "line_measure"}, {"atoms", nu.size()}, {"total_mass", nu.total_mass()}});
    } else {
        const auto x = parse_mmspace(j);
        out.update({{"kind", "mm_space"}, {"points", x.size()}, {"total_mass", x.total_mass()}, {"metric", x.is_metric()},
                    {"diameter", x.diameter()}});
    }
    emit(out);
    return ok;
}

int cmd_sep() {
    const json j = input();
    const double k1 = kappa();
    const double k2 = g.kappa2.value_or(k1);
    const CertifiedValue v = is_line_measure(j) ? separation(parse_line_measure(j), k1, k2, exact_limit())
                                                : separation(parse_mmspace(j), k1, k2, exact_limit());
    json out = to_json(v);
    out.update({{"kappa1", k1}, {"kappa2", k2}});
    emit(out);
    return ok;
}

int cmd_pdiam() {
    const json j = input();
    const double k = kappa();
    const CertifiedValue v = is_line_measure(j) ? partial_diameter(parse_line_measure(j), k)
                                                : partial_diameter(parse_mmspace(j), k, exact_limit());
    json out = to_json(v);
    out["kappa"] = k;
    emit(out);
    return ok;
}

int cmd_alpha(double r) {
    const auto c = concentration_function(parse_mmspace(input()), r, exact_limit());
    json out = to_json(c.value);
    out.update({{"r", r}, {"rescaled", c.rescaled}});
    emit(out);
    return ok;
}

int cmd_obsdiam(std::size_t probes) {
    ObsDiamOptions opt;
    opt.n_probes = probes;
    opt.seed = g.seed.value_or(0);
    opt.exact_limit = exact_limit();
    const auto r = obs_diameter_interval(parse_mmspace(input()), kappa(), opt);
    json out = to_json(r.value);
    out.update({{"kappa", kappa()}, {"probes", r.probes.size()}});
    emit(out);
    return ok;
}

int cmd_median(std::optional<double> eps) {
    const auto nu = parse_line_measure(input());
    const auto m = median(nu);
    json out{{"low", m.low}, {"high", m.high}, {"representative", m.representative}};
    if (eps) out.update({{"eps", *eps}, {"deviation_mass", deviation_mass(nu, m.representative, *eps)}});
    emit(out);
    return ok;
}

int cmd_project() {
    const auto nu = parse_point_cloud(input());
    const auto b = projection_bound(nu, kappa());
    json out{{"kappa", kappa()}, {"bound", to_json(b.bound)}, {"axis_diameters", b.axis_diameters}};
    emit(out);
    return ok;
}

int cmd_capture_doubling(std::optional<double> r0, std::optional<double> constant, std::optional<double> measure_c) {
    const auto x = parse_mmspace(input());
    const double k = kappa();
    if (!r0) r0 = doubling_capture_radius(x, k, measure_c.value_or(measured_doubling_constant(x)), exact_limit());
    const auto c = ball_capture(x, *r0, k, profile_from(constant, measure_c), exact_limit());
    json out{{"r0", *r0}, {"kappa", k}, {"hypothesis_ok", c.hypothesis_ok}, {"diagnostics", c.diagnostics}};
    if (!c.hypothesis_ok) {
        emit(out);
        return hypothesis;
    }
    const bool holds = c.captured_mass >= x.total_mass() - k - mass_tol;
    out.update({{"x0", c.x0},
                {"radius", 3.0 * *r0},
                {"captured_mass", c.captured_mass},
                {"holds", holds},
                {"trace",
                 {{"net", c.trace.net},
                  {"k", c.trace.k},
                  {"packing_bound", c.trace.packing_bound},
                  {"chosen", c.trace.chosen},
                  {"family_mass", c.trace.family_mass},
                  {"doubled_mass", c.trace.doubled_mass},
                  {"center_mass", c.trace.center_mass},
                  {"sep_upper", c.trace.sep_upper}}}});
    emit(out);
    return verdict(holds);
}

json point_json(const GraphPoint& p) {
    if (p.edge == no_index) return {{"vertex", p.vertex}};
    return {{"edge", p.edge}, {"offset", p.offset}};
}

int cmd_capture_tree() {
    const auto gr = parse_graph(input());
    const auto t = tree_capture(gr.graph, gr.atoms, kappa(), exact_limit());
    emit({{"kappa", kappa()}, {"center", point_json(t.center)}, {"radius", t.radius}, {"sep", t.sep}, {"holds", t.holds}});
    return verdict(t.holds);
}

int cmd_graph_bound(double a) {
    const auto gr = parse_graph(input());
    const double k = kappa();
    if (!g.kappa2) throw Error(ErrorCode::invalid_input, "--kappa2 (kappa') is required");
    const auto b = graph_pdiam_bound(gr.graph, gr.atoms, a, k, *g.kappa2, exact_limit());
    json out{{"a", a}, {"kappa", k}, {"kappa_prime", *g.kappa2}, {"hypothesis_ok", b.hypothesis_ok}, {"diagnostics", b.diagnostics}};
    if (!b.hypothesis_ok) {
        emit(out);
        return hypothesis;
    }
    out.update({{"bound", b.bound}, {"vertex_term", b.vertex_term}, {"circle_term", b.circle_term},
                {"partial_diameter", to_json(b.partial_diameter)}, {"holds", b.holds}});
    emit(out);
    return verdict(b.holds);
}

int cmd_circle_bound(std::optional<double> circumference) {
    const json j = input();
    if (!circumference && j.contains("circumference")) circumference = j.at("circumference").get<double>();
    if (!circumference) throw Error(ErrorCode::invalid_input, "--circumference is required");
    const auto c = circle_bound(parse_line_measure(j), *circumference, kappa(), exact_limit());
    emit({{"kappa", kappa()}, {"circumference", *circumference}, {"sep", to_json(c.sep)}, {"bound", c.bound},
          {"partial_diameter", to_json(c.partial_diameter)}, {"holds", c.holds}});
    return verdict(c.holds);
}

json modulus_json(const ModulusFunction& f) { return {{"breakpoints", f.breakpoints()}, {"values", f.values()}}; }

int cmd_orbit(std::optional<std::size_t> x_override) {
    const auto a = parse_action(input());
    json out;
    std::optional<MaterializedOrbit> mat;
    const FiniteAction* action = nullptr;
    std::size_t x = x_override.value_or(a.x);
    if (a.model) {
        mat = materialize_orbit(*a.model, *a.model_x);
        action = &mat->action;
        x = mat->x;
        json pts = json::array();
        for (const auto& p : mat->points) pts.push_back(to_json(p));
        out["points"] = pts;
    } else {
        action = &finite_of(a);
    }
    if (x >= action->space().size()) throw Error(ErrorCode::invalid_input, "x is out of range");
    const auto m = moduli(*action, x);
    out.update({{"x", x}, {"orbit", action->orbit(x)}, {"displacement", action->displacement(x)},
                {"orbit_measure", orbit_measure(*action, x).weights()}, {"rho", modulus_json(m.rho)},
                {"omega", modulus_json(m.omega)}});
    emit(out);
    return ok;
}

struct HolderArgs {
    double c1 = 1.0, alpha = 1.0, c2 = 1.0, c3 = 1.0, beta = 1.0, c_user = 1.0;
    std::size_t dim = 2;
};

struct OrbitBoundArgs {
    std::string kind;
    std::optional<double> delta;
    std::optional<double> a;
    std::optional<double> constant;
    std::optional<double> measure_c;
    std::vector<std::size_t> set;
    HolderArgs holder;
};

int cmd_orbit_bound(const OrbitBoundArgs& args) {
    const std::string& kind = args.kind;
    if (kind == "holder") {
        const auto& h = args.holder;
        const HolderProfile p{{h.c1, h.alpha}, {h.c2, h.c3, h.beta}, h.c_user};
        const auto b = holder_bounds(p, h.dim, kappa());
        emit({{"kappa", kappa()}, {"crad_bound", b.crad_bound}, {"orbit_radius", b.orbit_radius},
              {"orbit_diam_bound", b.orbit_diam_bound()}});
        return ok;
    }
    const auto in = parse_action(input());
    if (kind == "model" || kind == "cayley") {
        if (!in.model) throw Error(ErrorCode::invalid_input, "a model action (\"isometries\") is required");
        if (kind == "model") {
            const auto b = crad_orbit_bound(*in.model, *in.model_x);
            emit({{"r", b.r}, {"center", to_json(b.center)}, {"bound_center", b.bound_center},
                  {"actual_center", b.actual_center}, {"z", to_json(b.z)}, {"bound_orbit_point", b.bound_orbit_point},
                  {"actual_orbit_point", b.actual_orbit_point}, {"holds", b.holds}});
            return verdict(b.holds);
        }
        if (!in.generated) throw Error(ErrorCode::invalid_input, "cayley bounds need a group given by generators");
        const auto b = cayley_orbit_bound(*in.generated, *in.model, *in.model_x);
        emit({{"radius", b.radius}, {"center", to_json(b.center)}, {"center_bound", b.center_bound},
              {"actual_center", b.actual_center}, {"z", to_json(b.z)}, {"orbit_point_bound", b.orbit_point_bound},
              {"actual_orbit_point", b.actual_orbit_point}, {"holds", b.holds}});
        return verdict(b.holds);
    }
    const FiniteAction& action = finite_of(in);
    const std::size_t lim = exact_limit();
    if (kind == "doubling") {
        const auto b = doubling_orbit_bound(action, in.x, kappa(), profile_from(args.constant, args.measure_c), lim);
        emit({{"r0", b.r0}, {"terms", b.terms}, {"z", b.z}, {"center_bound", b.center_bound},
              {"center_actual", b.center_actual}, {"orbit_point", b.orbit_point}, {"bound", b.bound},
              {"actual", b.actual}, {"holds", b.holds}});
        return verdict(b.holds);
    }
    if (kind == "compact") {
        if (!args.delta) throw Error(ErrorCode::invalid_input, "--delta is required");
        const auto b = compact_orbit_bound(action, in.x, *args.delta, lim);
        emit({{"delta", *args.delta}, {"covering", b.covering}, {"sep_term", b.sep_term}, {"r", b.r}, {"bound", b.bound},
              {"z", b.z}, {"actual", b.actual}, {"holds", b.holds}});
        return verdict(b.holds);
    }
    if (kind == "graph") {
        if (!in.graph) throw Error(ErrorCode::invalid_input, "the action space must be graph points");
        if (!args.a) throw Error(ErrorCode::invalid_input, "--a is required");
        if (!g.kappa2) throw Error(ErrorCode::invalid_input, "--kappa2 (kappa') is required");
        const auto b = graph_orbit_bound(*in.graph, action, in.x, *args.a, kappa(), *g.kappa2, lim);
        emit({{"s", b.s}, {"bound", b.bound}, {"z", b.z}, {"actual", b.actual}, {"holds", b.holds}});
        return verdict(b.holds);
    }
    if (kind == "ball") {
        if (!args.delta) throw Error(ErrorCode::invalid_input, "--delta is required");
        const auto c = ball_certificate(action, in.x, *args.delta);
        emit(certificate_json(c));
        return verdict(c.holds);
    }
    if (kind == "subset") {
        const auto c = subset_certificate(action, in.x, args.set);
        emit(certificate_json(c));
        return verdict(c.holds);
    }
    if (kind == "limit") {
        const auto c = limit_certificate(action, in.x, lim);
        emit(certificate_json(c));
        return verdict(c.holds);
    }
    throw Error(ErrorCode::invalid_input, "unknown orbit-bound kind " + kind);
}

int cmd_cayley() {
    const json j = input();
    const bool with_action = j.contains("group");
    ActionInput in;
    std::optional<GeneratedGroup> group;
    if (with_action) {
        in = parse_action(j);
        group = in.generated;
        if (!group) throw Error(ErrorCode::invalid_input, "the group must be given by permutation generators");
    } else {
        group = parse_generated_group(j);
    }
    const auto spec = lambda1(*group);
    json out{{"size", group->size()}, {"s", group->s}, {"lambda1", std::isinf(spec.lambda1) ? json(nullptr) : json(spec.lambda1)},
             {"eigenvalues", to_json(spec.eigenvalues)}};
    int code = ok;
    if (in.model) {
        if (g.kappa) {
            const auto c = cayley_crad_bound(*group, *in.model, *in.model_x, *g.kappa);
            out["crad"] = {{"kappa", *g.kappa}, {"omega1", c.omega1}, {"bound", c.bound}, {"actual", c.actual_crad}, {"holds", c.holds}};
            if (!c.holds) code = violation;
        }
        const auto b = cayley_orbit_bound(*group, *in.model, *in.model_x);
        out["orbit"] = {{"radius", b.radius}, {"center_bound", b.center_bound}, {"actual_center", b.actual_center},
                        {"orbit_point_bound", b.orbit_point_bound}, {"actual_orbit_point", b.actual_orbit_point},
                        {"holds", b.holds}};
        if (!b.holds) code = violation;
    }
    emit(out);
    return code;
}

int cmd_karcher(bool iterate, double tolerance) {
    const json j = input();
    const auto space = parse_model(j);
    const auto nu = parse_model_measure(space, j);
    KarcherOptions opt;
    opt.iterate = iterate;
    opt.tolerance = tolerance;
    const auto r = karcher_mean(space, nu, opt);
    json out{{"center", to_json(r.center)}, {"residual", r.residual}, {"iterations", r.iterations}, {"step", r.step}};
    if (g.kappa) out["crad"] = central_radius(space, nu, r.center, *g.kappa);
    emit(out);
    return ok;
}

int cmd_crad() {
    const json j = input();
    const auto space = parse_model(j);
    const auto nu = parse_model_measure(space, j);
    const auto center = karcher_mean(space, nu).center;
    emit({{"kappa", kappa()}, {"center", to_json(center)}, {"crad", central_radius(space, nu, center, kappa())}});
    return ok;
}

int cmd_verify(std::size_t count, bool self_test, const std::string& dump_dir) {
    VerifyOptions opt;
    opt.seed = g.seed.value_or(0);
    opt.count = count;
    opt.exact_limit = exact_limit();
    opt.self_test = self_test;
    if (!dump_dir.empty()) opt.dump_dir = dump_dir;
    const auto report = run_verify(opt);
    if (g.format == "csv") {
        std::ostringstream text;
        text << "name,instances,violations,min_slack,max_slack,seconds\n";
        for (const auto& e : report.entries)
            text << e.name << ',' << e.instances << ',' << e.violations << ',' << e.min_slack << ',' << e.max_slack << ','
                 << e.seconds << '\n';
        emit_text(text.str());
    } else {
        emit_text(to_json(report).dump(2) + "\n");
    }
    return report.total_violations() == 0 ? ok : violation;
}

int cmd_sweep(SweepSpec spec, const std::string& family, bool format_given) {
    spec.family = parse_family(family);
    spec.seed = g.seed;
    spec.exact_limit = exact_limit();
    if (g.kappa && spec.kappas.empty()) spec.kappas = {*g.kappa};
    if (spec.kappas.empty()) spec.kappas = {0.1};
    const auto rows = levy_sweep(spec);
    const bool csv = !format_given || g.format == "csv";
    emit_text(csv ? sweep_csv(spec, rows) : sweep_json(spec, rows));
    return ok;
}

int report_error(const Error& e, int code) {
    json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (!e.details().empty()) j["details"] = e.details();
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentration-of-measure invariants and orbit-diameter certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("-i,--input", g.input, "Input JSON file ('-' for stdin)");
    app.add_option("-o,--output", g.output, "Output file (default stdout)");
    app.add_option("--kappa", g.kappa, "Mass deficit");
    app.add_option("--kappa2", g.kappa2, "Second mass parameter");
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--exact-limit", g.exact_limit, "Largest support searched exactly");
    auto* format_opt = app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::function<int()> run;

    app.add_subcommand("validate", "Validate an input file")->callback([&] { run = cmd_validate; });
    app.add_subcommand("sep", "Separation distance Sep(X; kappa, kappa2)")->callback([&] { run = cmd_sep; });
    app.add_subcommand("pdiam", "Partial diameter diam(X, m - kappa)")->callback([&] { run = cmd_pdiam; });

    double radius = 0.0;
    auto* alpha = app.add_subcommand("alpha", "Concentration function alpha(r)");
    alpha->add_option("--radius,-r", radius, "Radius r")->required();
    alpha->callback([&] { run = [&] { return cmd_alpha(radius); }; });

    std::size_t probes = 64;
    auto* obsdiam = app.add_subcommand("obsdiam", "Observable diameter interval");
    obsdiam->add_option("--probes", probes, "Random McShane probes");
    obsdiam->callback([&] { run = [&] { return cmd_obsdiam(probes); }; });

    std::optional<double> eps;
    auto* med = app.add_subcommand("median", "Median interval of a measure on the line");
    med->add_option("--eps", eps, "Also report mass of |f - m| >= eps");
    med->callback([&] { run = [&] { return cmd_median(eps); }; });

    app.add_subcommand("project", "Coordinate-projection bound for point clouds")->callback([&] { run = cmd_project; });

    std::optional<double> r0, constant, measure_c;
    auto* capd = app.add_subcommand("capture-doubling", "Ball capture in doubling spaces");
    capd->add_option("--r0", r0, "Scale r0 (default: smallest admissible)");
    capd->add_option("--constant", constant, "Explicit packing constant C(r0, 5 r0)");
    capd->add_option("--doubling-measure", measure_c, "Measure-doubling constant");
    capd->callback([&] { run = [&] { return cmd_capture_doubling(r0, constant, measure_c); }; });

    app.add_subcommand("capture-tree", "Ball capture on metric trees")->callback([&] { run = cmd_capture_tree; });

    double a = 0.0;
    auto* gb = app.add_subcommand("graph-bound", "Partial-diameter bound on metric graphs");
    gb->add_option("--a", a, "Lower bound for the non-loop edge lengths")->required();
    gb->callback([&] { run = [&] { return cmd_graph_bound(a); }; });

    std::optional<double> circumference;
    auto* cb = app.add_subcommand("circle-bound", "Partial-diameter bound on a circle");
    cb->add_option("--circumference", circumference, "Circle length");
    cb->callback([&] { run = [&] { return cmd_circle_bound(circumference); }; });

    std::optional<std::size_t> orbit_x;
    auto* orbit = app.add_subcommand("orbit", "Orbit, orbit measure and moduli");
    orbit->add_option("--x", orbit_x, "Base point index");
    orbit->callback([&] { run = [&] { return cmd_orbit(orbit_x); }; });

    OrbitBoundArgs ob;
    auto* obc = app.add_subcommand("orbit-bound", "Orbit-diameter bounds");
    obc->add_option("kind", ob.kind, "doubling|compact|graph|model|cayley|holder|ball|subset|limit")
        ->required()
        ->check(CLI::IsMember({"doubling", "compact", "graph", "model", "cayley", "holder", "ball", "subset", "limit"}));
    obc->add_option("--delta", ob.delta, "Covering scale or ball radius");
    obc->add_option("--a", ob.a, "Graph edge-length bound");
    obc->add_option("--constant", ob.constant, "Explicit packing constant");
    obc->add_option("--doubling-measure", ob.measure_c, "Measure-doubling constant");
    obc->add_option("--set", ob.set, "Subset of points with orbit mass > 1/2");
    obc->add_option("--c1", ob.holder.c1);
    obc->add_option("--alpha", ob.holder.alpha);
    obc->add_option("--c2", ob.holder.c2);
    obc->add_option("--c3", ob.holder.c3);
    obc->add_option("--beta", ob.holder.beta);
    obc->add_option("--c-user", ob.holder.c_user);
    obc->add_option("--dim", ob.holder.dim);
    obc->callback([&] { run = [&] { return cmd_orbit_bound(ob); }; });

    app.add_subcommand("cayley", "Cayley-graph spectrum and spectral orbit bounds")->callback([&] { run = cmd_cayley; });

    bool iterate = false;
    double tolerance = 1e-12;
    auto* karcher = app.add_subcommand("karcher", "Barycenter of a measure on R^k or H^k");
    karcher->add_flag("--iterate", iterate, "Use the iteration on R^k too");
    karcher->add_option("--tolerance", tolerance, "Stationarity tolerance");
    karcher->callback([&] { run = [&] { return cmd_karcher(iterate, tolerance); }; });

    app.add_subcommand("crad", "Central radius around the barycenter")->callback([&] { run = cmd_crad; });

    std::size_t count = 50;
    bool self_test = false;
    std::string dump_dir;
    auto* verify = app.add_subcommand("verify", "Randomized inequality suite");
    verify->add_option("--count", count, "Instances per inequality");
    verify->add_flag("--self-test", self_test, "Inject a faulty separation value");
    verify->add_option("--dump-dir", dump_dir, "Directory for violating instances");
    verify->callback([&] { run = [&] { return cmd_verify(count, self_test, dump_dir); }; });

    SweepSpec spec;
    spec.kappas.clear();
    std::string family = "hypercube";
    auto* sweep = app.add_subcommand("sweep", "Levy-family sweeps (CSV)");
    sweep->add_option("--family", family, "hypercube|discrete_torus|cycle|subgroup_chain|random_mm");
    sweep->add_option("--min", spec.min_size, "Smallest size");
    sweep->add_option("--max", spec.max_size, "Largest size");
    sweep->add_option("--kappas", spec.kappas, "Mass deficits");
    sweep->add_option("--full-limit", spec.full_limit, "Largest space for full-space columns");
    sweep->add_option("--probes", spec.probes, "McShane probes for ObsDiam");
    sweep->callback([&] { run = [&] { return cmd_sweep(spec, family, format_opt->count() > 0); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        return run();
    } catch (const HypothesisError& e) {
        return report_error(e, hypothesis);
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::hypothesis_failed:
            case ErrorCode::mass_hypothesis_fails:
            case ErrorCode::alpha_exceeds_beta: return report_error(e, hypothesis);
            case ErrorCode::internal_claim_failed: return report_error(e, violation);
            default: return report_error(e, input_error);
        }
    } catch (const json::exception& e) {
        std::cerr << json{{"error", "invalid_input"}, {"message", e.what()}}.dump() << "\n";
        return input_error;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return input_error;
    }
}
