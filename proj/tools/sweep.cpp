#include "sweep.hpp"

#include <cmath>
#include <charconv>

#include "json.hpp"

#include "concentra/cayley.hpp"
#include "instances.hpp"

namespace concentra::cli {

namespace {

constexpr std::uint64_t family_tag(Family f) { return static_cast<std::uint64_t>(f) + 1; }

// Shortest representation that reads back to the same double.
std::string num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double cyclic_steps(std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t d = a > b ? a - b : b - a;
    return static_cast<double>(std::min(d, n - d));
}

FiniteMMSpace uniform_space(std::vector<double> flat, std::size_t n) {
    return make_unchecked(n, std::move(flat), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteMMSpace hypercube(std::size_t n) {
    const std::size_t p = std::size_t{1} << n;
    std::vector<double> d(p * p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
            d[a * p + b] = static_cast<double>(__builtin_popcountll(a ^ b)) / static_cast<double>(n);
    return uniform_space(std::move(d), p);
}

FiniteMMSpace discrete_torus(std::size_t n) {
    const std::size_t p = n * n;
    std::vector<double> d(p * p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
            d[a * p + b] = (cyclic_steps(a / n, b / n, n) + cyclic_steps(a % n, b % n, n)) / static_cast<double>(n);
    return uniform_space(std::move(d), p);
}

FiniteMMSpace cycle(std::size_t n) {
    std::vector<double> d(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) d[a * n + b] = cyclic_steps(a, b, n) / static_cast<double>(n);
    return uniform_space(std::move(d), n);
}

// Z_{2^j} rotating 2^levels equally spaced points of a circle of circumference 1.
FiniteAction chain_action(std::size_t j, std::size_t levels) {
    const std::size_t p = std::size_t{1} << levels;
    const std::size_t order = std::size_t{1} << j;
    const std::size_t stride = p / order;
    FiniteMMSpace circle = cycle(p);
    std::vector<std::vector<std::size_t>> maps(order, std::vector<std::size_t>(p));
    for (std::size_t k = 0; k < order; ++k)
        for (std::size_t x = 0; x < p; ++x) maps[k][x] = (x + k * stride) % p;
    return FiniteAction(cyclic_group(order), std::move(circle), std::move(maps));
}

enum Column : std::size_t {
    sep_lower,
    sep_upper,
    alpha_first,
    obsdiam_lower = alpha_first + 3,
    obsdiam_upper,
    coord_sum_sep,
    lambda1_col,
    lambda1_closed_form,
    orbit_diam,
    limit_pdiam,
    chain_bound,
    so_alpha_first,
    torus_alpha_first = so_alpha_first + 3,
    so_obsdiam = torus_alpha_first + 3,
    torus_obsdiam,
    column_count
};

}  // namespace

Family parse_family(const std::string& name) {
    if (name == "hypercube") return Family::hypercube;
    if (name == "discrete_torus") return Family::discrete_torus;
    if (name == "cycle") return Family::cycle;
    if (name == "subgroup_chain") return Family::subgroup_chain;
    if (name == "random_mm") return Family::random_mm;
    throw Error(ErrorCode::invalid_input, "unknown sweep family " + name);
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::hypercube: return "hypercube";
        case Family::discrete_torus: return "discrete_torus";
        case Family::cycle: return "cycle";
        case Family::subgroup_chain: return "subgroup_chain";
        case Family::random_mm: return "random_mm";
    }
    return "?";
}

std::size_t max_family_size(Family family) {
    switch (family) {
        case Family::hypercube: return 10;
        case Family::discrete_torus: return 16;
        case Family::cycle: return 128;
        case Family::subgroup_chain: return 8;
        case Family::random_mm: return 256;
    }
    return 0;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"sep_lower", "sep_upper"};
        for (double r : sweep_radii) c.push_back("alpha_upper_r" + num(r));
        for (const char* s : {"obsdiam_lower", "obsdiam_upper", "coord_sum_sep", "lambda1", "lambda1_closed_form",
                              "orbit_diam", "limit_pdiam", "chain_bound"})
            c.emplace_back(s);
        for (double r : sweep_radii) c.push_back("so_alpha_r" + num(r));
        for (double r : sweep_radii) c.push_back("torus_alpha_r" + num(r));
        c.emplace_back("so_obsdiam");
        c.emplace_back("torus_obsdiam");
        return c;
    }();
    return cols;
}

double hypercube_coordinate_sep(std::size_t n, double kappa) {
    std::vector<Atom> atoms;
    double binom = 1.0;
    for (std::size_t k = 0; k <= n; ++k) {
        atoms.push_back({static_cast<double>(k) / static_cast<double>(n), binom / std::ldexp(1.0, static_cast<int>(n))});
        binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    const auto sep = separation(RealMeasure1D(std::move(atoms)), kappa, kappa, std::max<std::size_t>(n + 1, default_exact_limit));
    if (!sep.exact) throw Error(ErrorCode::internal_claim_failed, "coordinate-sum separation is not exact");
    return sep.lower;
}

std::vector<SweepRow> levy_sweep(const SweepSpec& spec) {
    const std::size_t cap = max_family_size(spec.family);
    if (spec.min_size > spec.max_size) throw Error(ErrorCode::invalid_input, "empty size range");
    if (spec.max_size > cap)
        throw Error(ErrorCode::spec_too_large,
                    std::string(to_string(spec.family)) + " sizes are limited to " + std::to_string(cap));
    if (spec.family == Family::random_mm && !spec.seed) throw Error(ErrorCode::invalid_input, "random_mm needs a seed");
    if (spec.kappas.empty()) throw Error(ErrorCode::invalid_input, "no kappa values");
    for (double k : spec.kappas)
        if (!(k > 0.0) || k > 1.0) throw Error(ErrorCode::invalid_input, "kappa values must lie in (0, 1]");
    const std::uint64_t seed = spec.seed.value_or(0);
    const std::size_t min_size = std::max<std::size_t>(spec.min_size, spec.family == Family::subgroup_chain ? 0 : 1);

    std::vector<SweepRow> rows;
    for (std::size_t n = min_size; n <= spec.max_size; ++n) {
        std::optional<FiniteMMSpace> space;
        std::optional<FiniteAction> chain;
        std::vector<std::optional<double>> common(column_count);

        switch (spec.family) {
            case Family::hypercube:
                space = hypercube(n);
                break;
            case Family::discrete_torus:
                space = discrete_torus(n);
                break;
            case Family::cycle: {
                space = cycle(n);
                if (n >= 3) {
                    Permutation step(n);
                    for (std::size_t i = 0; i < n; ++i) step[i] = (i + 1) % n;
                    common[lambda1_col] = lambda1(generate_group({step}, std::max(default_group_cap, n))).lambda1;
                    common[lambda1_closed_form] = 2.0 * (1.0 - std::cos(2.0 * M_PI / static_cast<double>(n)));
                }
                break;
            }
            case Family::subgroup_chain: {
                chain = chain_action(n, spec.max_size);
                space = chain->space();
                double diam = 0.0;
                const auto orbit = chain->orbit(0);
                for (std::size_t a : orbit)
                    for (std::size_t b : orbit) diam = std::max(diam, space->dist(a, b));
                const auto cert = limit_certificate(*chain, 0, spec.exact_limit);
                const double l = cert.grid_diameters.back();
                common[orbit_diam] = diam;
                common[limit_pdiam] = l;
                common[chain_bound] = 2.0 * l + 2.0 * rho_modulus(*chain).right_limit(l);
                break;
            }
            case Family::random_mm: {
                Rng rng = derived_rng(seed, family_tag(spec.family), n);
                space = random_metric_space(rng, n).normalized();
                break;
            }
        }

        for (std::size_t r = 0; r < sweep_radii.size(); ++r) {
            const double rad = sweep_radii[r];
            common[so_alpha_first + r] = n >= 1 ? std::exp(-static_cast<double>(n - 1) * rad * rad / 8.0) : 1.0;
            common[torus_alpha_first + r] = std::exp(-rad / 3.0);
        }
        const bool full = space->size() <= spec.full_limit;
        if (full) {
            for (std::size_t r = 0; r < sweep_radii.size(); ++r)
                common[alpha_first + r] = concentration_function(*space, sweep_radii[r], spec.exact_limit).value.upper;
        }

        for (double kappa : spec.kappas) {
            SweepRow row{n, space->size(), kappa, common};
            if (spec.family == Family::hypercube) row.values[coord_sum_sep] = hypercube_coordinate_sep(n, kappa);
            if (n >= 2) row.values[so_obsdiam] = 4.0 * std::sqrt(2.0 * std::log(2.0 / kappa) / static_cast<double>(n - 1));
            row.values[torus_obsdiam] = 6.0 * std::log(2.0 / kappa);
            if (full) {
                const auto sep = separation(*space, kappa, kappa, spec.exact_limit);
                row.values[sep_lower] = sep.lower;
                row.values[sep_upper] = sep.upper;
                ObsDiamOptions opt;
                opt.n_probes = spec.probes;
                opt.seed = derived_rng(seed, family_tag(spec.family) + 100, n)();
                opt.exact_limit = spec.exact_limit;
                const auto od = obs_diameter_interval(*space, kappa, opt);
                row.values[obsdiam_lower] = od.value.lower;
                row.values[obsdiam_upper] = od.value.upper;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::string out = "family,n,points,kappa";
    for (const auto& c : sweep_columns()) out += "," + c;
    out += "\n";
    for (const auto& row : rows) {
        out += std::string(to_string(spec.family)) + "," + std::to_string(row.n) + "," + std::to_string(row.points) + "," +
               num(row.kappa);
        for (const auto& v : row.values) out += "," + (v ? num(*v) : std::string());
        out += "\n";
    }
    return out;
}

std::string sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r;
        r["family"] = to_string(spec.family);
        r["n"] = row.n;
        r["points"] = row.points;
        r["kappa"] = row.kappa;
        for (std::size_t c = 0; c < row.values.size(); ++c)
            r[sweep_columns()[c]] = row.values[c] ? nlohmann::ordered_json(*row.values[c]) : nlohmann::ordered_json();
        out.push_back(std::move(r));
    }
    return out.dump(2) + "\n";
}

}  // namespace concentra::cli
