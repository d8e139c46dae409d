#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>

#include "concentra/cayley.hpp"
#include "concentra/doubling.hpp"
#include "concentra/euclidean.hpp"
#include "concentra/graph_tree.hpp"
#include "instances.hpp"
#include "io.hpp"

namespace concentra::cli {

namespace {

constexpr double check_tol = 1e-9;

struct Outcome {
    double lhs = 0.0;
    double rhs = 0.0;
    json instance;
};

// Returns no outcomes when the instance fails a hypothesis and is skipped.
using Check = std::function<std::vector<Outcome>(Rng&)>;

json graph_json(const MetricGraph& g, const std::vector<GraphAtom>& atoms) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"len", e.length}});
    json pts = json::array();
    for (const auto& a : atoms) {
        if (a.point.edge == no_index) pts.push_back({{"vertex", a.point.vertex}, {"mass", a.mass}});
        else pts.push_back({{"edge", a.point.edge}, {"offset", a.point.offset}, {"mass", a.mass}});
    }
    return {{"vertices", g.vertex_count()}, {"edges", edges}, {"atoms", pts}};
}

json action_json(const ActionInstance& inst) {
    json gens = json::array();
    for (std::size_t g : inst.group.generators) gens.push_back(inst.group.elements[g]);
    return {{"group", {{"generators", gens}}},
            {"space", mmspace_to_json(inst.action.space())},
            {"maps", inst.action.maps()},
            {"x", inst.x}};
}

// Largest pairwise distance strictly below the true separation.
double faulty_separation(const FiniteMMSpace& x, double k1, double k2, std::size_t exact_limit) {
    const double sep = separation(x, k1, k2, exact_limit).lower;
    double below = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x.dist(i, j) < sep && x.dist(i, j) >= below) {
                below = x.dist(i, j);
                found = true;
            }
    return found ? below : sep;
}

std::vector<std::pair<std::string, Check>> checks(const VerifyOptions& opt) {
    const std::size_t lim = opt.exact_limit;
    std::vector<std::pair<std::string, Check>> out;

    out.emplace_back("pdiam_le_sep", [lim, faulty = opt.self_test](Rng& rng) {
        const auto x = random_line_space(rng, 2 + below(rng, 11));
        std::vector<Outcome> res;
        for (double k : {0.05, 0.1, 0.25}) {
            const double sep = faulty ? faulty_separation(x, k, k, lim) : separation(x, k, k, lim).lower;
            json inst = mmspace_to_json(x);
            inst["kappa"] = k;
            res.push_back({partial_diameter(x, 2.0 * k, lim).upper, sep, std::move(inst)});
        }
        return res;
    });

    out.emplace_back("obsdiam_le_sep", [lim](Rng& rng) {
        const auto x = random_metric_space(rng, 2 + below(rng, 9));
        std::vector<Outcome> res;
        for (double k : {0.05, 0.1, 0.25}) {
            ObsDiamOptions o;
            o.seed = rng();
            o.exact_limit = lim;
            o.n_probes = 16;
            json inst = mmspace_to_json(x);
            inst["kappa"] = k;
            res.push_back({obs_diameter_interval(x, 2.0 * k, o).value.lower, separation(x, k, k, lim).lower, std::move(inst)});
        }
        return res;
    });

    out.emplace_back("obsdiam_ge_sep", [lim](Rng& rng) {
        const auto x = random_metric_space(rng, 2 + below(rng, 8));
        std::vector<Outcome> res;
        for (double k : {0.2, 0.3, 0.4}) {
            ObsDiamOptions o;
            o.seed = rng();
            o.exact_limit = lim;
            o.n_probes = 16;
            json inst = mmspace_to_json(x);
            inst["kappa"] = k;
            res.push_back({separation(x, k, k, lim).upper, obs_diameter_interval(x, 0.5 * k, o).value.lower, std::move(inst)});
        }
        return res;
    });

    out.emplace_back("deviation_le_2alpha", [lim](Rng& rng) {
        const auto x = random_space(rng, 2 + below(rng, 7)).normalized();
        std::vector<ProbeFunction> probes = mcshane_probes(x, 4, rng());
        probes.push_back(point_distance_probe(x, below(rng, x.size())));
        std::vector<Outcome> res;
        for (const auto& raw : probes) {
            const auto p = contract_probe(raw);
            const auto nu = pushforward(x, p.values);
            const auto med = median(nu);
            for (double eps : {0.25, 0.5, 1.0, 2.0, 3.0}) {
                const double alpha = concentration_function(x, eps, lim).value.lower;
                double dev = 0.0;
                for (double mf : {med.low, med.representative, med.high}) dev = std::max(dev, deviation_mass(nu, mf, eps));
                json inst = mmspace_to_json(x);
                inst["probe"] = p.values;
                inst["eps"] = eps;
                res.push_back({dev, 2.0 * alpha, std::move(inst)});
            }
        }
        return res;
    });

    out.emplace_back("projection", [lim](Rng& rng) {
        const auto nu = random_cloud(rng, 2 + below(rng, 9), 2 + below(rng, 2));
        const double k = uniform(rng, 0.02, 0.6);
        json inst = {{"coords", nu.coords()}, {"weights", nu.weights()}, {"kappa", k}};
        return std::vector<Outcome>{
            {partial_diameter(nu.as_mmspace(), k, lim).upper, projection_bound(nu, k).bound.lower, std::move(inst)}};
    });

    out.emplace_back("orbit_certificates", [lim](Rng& rng) {
        const auto inst = random_permutation_action(rng, 24, 12);
        std::vector<Outcome> res;
        const auto orbit = inst.action.orbit(inst.x);
        const auto& sp = inst.action.space();
        auto record = [&](const OrbitCertificate& c, json extra) {
            json j = action_json(inst);
            j["mode"] = c.mode;
            j.update(extra);
            res.push_back({c.actual, c.bound, std::move(j)});
            if (c.center) res.push_back({c.center_actual, c.center_bound, action_json(inst)});
        };
        double far = 0.0;
        for (std::size_t a : orbit)
            for (std::size_t b : orbit) far = std::max(far, sp.dist(a, b));
        const double delta = std::max(uniform(rng, 0.0, 1.0) * far, 1e-3);
        try {
            record(ball_certificate(inst.action, inst.x, delta), {{"delta", delta}});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::mass_hypothesis_fails) throw;
        }
        // Orbit points nearest to a random orbit point, until mass > 1/2.
        const std::size_t pivot = orbit[below(rng, orbit.size())];
        auto sorted = orbit;
        std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) { return sp.dist(pivot, a) < sp.dist(pivot, b); });
        const auto nu = orbit_measure(inst.action, inst.x);
        std::vector<std::size_t> set;
        double mass = 0.0;
        for (std::size_t p : sorted) {
            set.push_back(p);
            mass += nu.weight(p);
            if (mass > 0.5 + 1e-12) break;
        }
        record(subset_certificate(inst.action, inst.x, set), {{"set", set}});
        record(limit_certificate(inst.action, inst.x, lim), json::object());
        return res;
    });

    out.emplace_back("pushforward_alpha", [lim](Rng& rng) {
        const auto inst = random_permutation_action(rng, 24, 12);
        const auto nu = orbit_measure(inst.action, inst.x);
        std::vector<Outcome> res;
        for (double r : {uniform(rng, 0.1, 1.0), uniform(rng, 1.0, 4.0)}) {
            json j = action_json(inst);
            j["r"] = r;
            res.push_back({concentration_function(nu, r, lim).value.lower,
                           pushforward_concentration_bound(inst.action, inst.x, r, std::nullopt, std::nullopt, lim).bound,
                           std::move(j)});
        }
        return res;
    });

    out.emplace_back("ball_capture", [lim](Rng& rng) {
        const auto x = random_metric_space(rng, 4 + below(rng, 9));
        const double r0 = uniform(rng, 0.3, 3.0);
        const double k = uniform(rng, 0.05, 0.9);
        const auto c = ball_capture(x, r0, k, DoublingProfile::measured_packing(), lim);
        if (!c.hypothesis_ok) return std::vector<Outcome>{};
        json inst = mmspace_to_json(x);
        inst["r0"] = r0;
        inst["kappa"] = k;
        return std::vector<Outcome>{{x.total_mass() - k, c.captured_mass, std::move(inst)}};
    });

    out.emplace_back("covering_separation", [lim](Rng& rng) {
        const auto x = random_metric_space(rng, 2 + below(rng, 8));
        const double k = uniform(rng, 0.05, 0.9);
        const double delta = uniform(rng, 0.2, 3.0);
        json inst = mmspace_to_json(x);
        inst["kappa"] = k;
        inst["delta"] = delta;
        return std::vector<Outcome>{
            {partial_diameter(x, k, lim).upper, covering_separation_bound(x, k, delta, lim), std::move(inst)}};
    });

    out.emplace_back("graph_bound", [lim](Rng& rng) {
        const auto g = random_graph(rng, 8, 12, 12);
        const double k = uniform(rng, 0.1, 0.9);
        const double kp = k * uniform(rng, 0.05, 0.95);
        const double a = std::isinf(g.graph.min_edge_length()) ? uniform(rng, 0.5, 5.0)
                                                                : g.graph.min_edge_length() * uniform(rng, 0.3, 0.999);
        const auto b = graph_pdiam_bound(g.graph, g.atoms, a, k, kp, lim);
        if (!b.hypothesis_ok) return std::vector<Outcome>{};
        json inst = graph_json(g.graph, g.atoms);
        inst.update({{"a", a}, {"kappa", k}, {"kappa_prime", kp}});
        return std::vector<Outcome>{{partial_diameter(g.graph.atom_space(g.atoms), k, lim).upper, b.bound, std::move(inst)}};
    });

    out.emplace_back("tree_capture", [lim](Rng& rng) {
        const auto g = random_graph(rng, 8, 12, 10, true);
        const double k = uniform(rng, 0.05, 0.95);
        const auto t = tree_capture(g.graph, g.atoms, k, lim);
        const auto space = g.graph.atom_space(g.atoms);
        json inst = graph_json(g.graph, g.atoms);
        inst["kappa"] = k;
        double captured = 0.0;
        for (const auto& a : g.atoms)
            if (g.graph.distance(t.center, a.point) <= t.radius + 1e-9) captured += a.mass;
        return std::vector<Outcome>{{t.radius, separation(space, 0.5 * k, space.total_mass() / 3.0, lim).upper, inst},
                                    {space.total_mass() - k, captured, inst}};
    });

    out.emplace_back("circle_bound", [lim](Rng& rng) {
        const double len = uniform(rng, 1.0, 10.0);
        const std::size_t n = 1 + below(rng, 10);
        std::vector<Atom> atoms;
        const auto w = random_weights(rng, n, false);
        for (std::size_t i = 0; i < n; ++i) atoms.push_back({uniform(rng, 0.0, len), w[i]});
        const double k = uniform(rng, 0.05, 0.95);
        const auto c = circle_bound(RealMeasure1D(atoms), len, k, lim);
        json pos = json::array();
        for (const auto& a : atoms) pos.push_back({{"position", a.position}, {"mass", a.mass}});
        json inst = {{"atoms", pos}, {"circumference", len}, {"kappa", k}};
        return std::vector<Outcome>{{c.partial_diameter.upper, c.bound, std::move(inst)}};
    });

    out.emplace_back("cayley_crad", [](Rng& rng) {
        const std::size_t n = 3 + below(rng, 14);
        const double radius = std::array{0.5, 1.0, 2.0}[below(rng, 3)];
        const double k = std::array{0.1, 0.25, 0.4}[below(rng, 3)];
        const bool hyperbolic = rng() % 2 == 0;
        const ModelSpace space = hyperbolic ? ModelSpace::hyperbolic(2) : ModelSpace::euclidean(2);
        Permutation step(n);
        for (std::size_t i = 0; i < n; ++i) step[i] = (i + 1) % n;
        const auto g = generate_group({step});
        const auto action = cayley_model_action(g, space, {rotation(space, 0, 1, 2.0 * M_PI / static_cast<double>(n))});
        const auto b = cayley_crad_bound(g, action, model_point(space, radius), k);
        json inst = {{"n", n}, {"radius", radius}, {"kappa", k}, {"model", hyperbolic ? "hyperboloid" : "euclidean"}};
        return std::vector<Outcome>{{b.actual_crad, b.bound, std::move(inst)}};
    });

    return out;
}

}  // namespace

std::size_t VerifyReport::total_violations() const {
    std::size_t total = 0;
    for (const auto& e : entries) total += e.violations;
    return total;
}

VerifyReport run_verify(const VerifyOptions& options) {
    VerifyReport report;
    if (options.count == 0) return report;
    if (options.dump_dir) std::filesystem::create_directories(*options.dump_dir);
    std::uint64_t tag = 0;
    for (auto& [name, check] : checks(options)) {
        ++tag;
        VerifyEntry entry;
        entry.name = name;
        entry.min_slack = std::numeric_limits<double>::infinity();
        entry.max_slack = -std::numeric_limits<double>::infinity();
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < options.count; ++i) {
            Rng rng = derived_rng(options.seed, tag, i);
            std::size_t k = 0;
            for (auto& o : check(rng)) {
                ++entry.instances;
                const double slack = o.rhs - o.lhs;
                entry.min_slack = std::min(entry.min_slack, slack);
                entry.max_slack = std::max(entry.max_slack, slack);
                if (o.lhs <= o.rhs + check_tol * std::max(1.0, std::fabs(o.rhs))) continue;
                ++entry.violations;
                o.instance["lhs"] = o.lhs;
                o.instance["rhs"] = o.rhs;
                o.instance["seed"] = options.seed;
                o.instance["index"] = i;
                if (options.dump_dir) {
                    const auto path = std::filesystem::path(*options.dump_dir) /
                                      (name + "-" + std::to_string(i) + "-" + std::to_string(k) + ".json");
                    std::ofstream(path) << o.instance.dump(2) << "\n";
                    entry.dumps.push_back(path.string());
                }
                ++k;
            }
        }
        entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (entry.instances == 0) entry.min_slack = entry.max_slack = 0.0;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
    nlohmann::ordered_json out;
    out["violations"] = report.total_violations();
    out["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json j;
        j["name"] = e.name;
        j["instances"] = e.instances;
        j["violations"] = e.violations;
        j["min_slack"] = e.min_slack;
        j["max_slack"] = e.max_slack;
        j["seconds"] = e.seconds;
        if (!e.dumps.empty()) j["dumps"] = e.dumps;
        out["entries"].push_back(std::move(j));
    }
    return out;
}

}  // namespace concentra::cli
