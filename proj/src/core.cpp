#include "concentra/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace concentra {

namespace {

std::string fmt(const char* pattern, std::size_t a, std::size_t b, std::size_t c = 0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

bool triangle_holds(std::size_t n, const std::vector<double>& d) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = d[i * n + j];
            for (std::size_t k = 0; k < n; ++k) {
                if (dij > d[i * n + k] + d[k * n + j] + metric_tol) return false;
            }
        }
    }
    return true;
}

void check_weights(const std::vector<double>& w, std::vector<std::string>& violations,
                   bool& has_negative, bool& has_nonfinite) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i])) {
            violations.push_back(fmt("NonFiniteValue: weight %zu", i, 0));
            has_nonfinite = true;
        } else if (w[i] < 0.0) {
            violations.push_back(fmt("NegativeEntry: weight %zu", i, 0));
            has_negative = true;
        }
    }
}

std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return ids;
}

}  // namespace

FiniteMMSpace validate_mmspace(const RawMMSpace& raw) {
    const std::size_t n = raw.dist.size();
    std::vector<std::string> violations;
    ErrorCode first = ErrorCode::invalid_input;
    auto note = [&](ErrorCode code, std::string msg) {
        if (violations.empty()) first = code;
        violations.push_back(std::move(msg));
    };

    if (n == 0) throw Error(ErrorCode::invalid_input, "empty distance matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (raw.dist[i].size() != n) {
            throw Error(ErrorCode::invalid_input, "distance matrix is not square");
        }
    }
    if (raw.weights.size() != n) {
        throw Error(ErrorCode::invalid_input, "weight count does not match matrix size");
    }
    if (!raw.point_ids.empty() && raw.point_ids.size() != n) {
        throw Error(ErrorCode::invalid_input, "point id count does not match matrix size");
    }

    std::vector<double> flat(n * n);
    bool entries_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = raw.dist[i][j];
            flat[i * n + j] = v;
            if (!std::isfinite(v)) {
                note(ErrorCode::non_finite_value, fmt("NonFiniteValue: dist(%zu,%zu)", i, j));
                entries_ok = false;
            } else if (v < 0.0) {
                note(ErrorCode::negative_entry, fmt("NegativeEntry: dist(%zu,%zu)", i, j));
                entries_ok = false;
            }
        }
        if (std::isfinite(raw.dist[i][i]) && raw.dist[i][i] != 0.0) {
            note(ErrorCode::nonzero_diagonal, fmt("NonzeroDiagonal: dist(%zu,%zu)", i, i));
            entries_ok = false;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (raw.dist[i][j] != raw.dist[j][i] &&
                !(std::isnan(raw.dist[i][j]) && std::isnan(raw.dist[j][i]))) {
                note(ErrorCode::asymmetric_matrix, fmt("AsymmetricMatrix: dist(%zu,%zu)", i, j));
                entries_ok = false;
            }
        }
    }

    bool negative = false;
    bool nonfinite = false;
    std::vector<std::string> weight_violations;
    check_weights(raw.weights, weight_violations, negative, nonfinite);
    for (auto& v : weight_violations) {
        note(nonfinite ? ErrorCode::non_finite_value : ErrorCode::negative_entry, std::move(v));
    }
    double total = 0.0;
    if (!negative && !nonfinite) {
        total = std::accumulate(raw.weights.begin(), raw.weights.end(), 0.0);
        if (!(total > 0.0)) note(ErrorCode::zero_total_mass, "ZeroTotalMass");
    }

    bool metric = false;
    if (entries_ok) {
        if (raw.metric_strict) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    for (std::size_t k = 0; k < n; ++k) {
                        if (flat[i * n + j] > flat[i * n + k] + flat[k * n + j] + metric_tol) {
                            note(ErrorCode::triangle_violation,
                                 fmt("TriangleViolation(%zu,%zu,%zu)", i, j, k));
                        }
                    }
                }
            }
            metric = violations.empty();
        } else if (n <= 256) {
            metric = triangle_holds(n, flat);
        }
    }

    if (!violations.empty()) {
        std::string msg = violations.front();
        if (violations.size() > 1) msg += " (+" + std::to_string(violations.size() - 1) + " more)";
        throw Error(first, msg, std::move(violations));
    }

    FiniteMMSpace out;
    out.n_ = n;
    out.dist_ = std::move(flat);
    out.weights_ = raw.weights;
    out.ids_ = raw.point_ids.empty() ? default_ids(n) : raw.point_ids;
    out.total_mass_ = total;
    out.metric_ = metric;
    return out;
}

FiniteMMSpace make_unchecked(std::size_t n, std::vector<double> dist, std::vector<double> weights,
                             std::vector<std::string> ids) {
    if (n == 0) throw Error(ErrorCode::invalid_input, "empty space");
    if (dist.size() != n * n || weights.size() != n) {
        throw Error(ErrorCode::invalid_input, "size mismatch");
    }
    std::vector<std::string> violations;
    bool negative = false;
    bool nonfinite = false;
    check_weights(weights, violations, negative, nonfinite);
    if (!violations.empty()) {
        throw Error(nonfinite ? ErrorCode::non_finite_value : ErrorCode::negative_entry,
                    violations.front(), violations);
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::zero_total_mass, "");
    FiniteMMSpace out;
    out.n_ = n;
    out.metric_ = n <= 256 && triangle_holds(n, dist);
    out.dist_ = std::move(dist);
    out.weights_ = std::move(weights);
    out.ids_ = ids.empty() ? default_ids(n) : std::move(ids);
    out.total_mass_ = total;
    return out;
}

double FiniteMMSpace::diameter() const {
    return n_ == 0 ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

double FiniteMMSpace::support_diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (weights_[i] <= 0.0) continue;
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (weights_[j] > 0.0) best = std::max(best, dist(i, j));
        }
    }
    return best;
}

std::vector<std::size_t> FiniteMMSpace::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i) {
        if (weights_[i] > 0.0) out.push_back(i);
    }
    return out;
}

FiniteMMSpace FiniteMMSpace::with_weights(std::vector<double> weights) const {
    if (weights.size() != n_) throw Error(ErrorCode::invalid_input, "weight count mismatch");
    std::vector<std::string> violations;
    bool negative = false;
    bool nonfinite = false;
    check_weights(weights, violations, negative, nonfinite);
    if (!violations.empty()) {
        throw Error(nonfinite ? ErrorCode::non_finite_value : ErrorCode::negative_entry,
                    violations.front(), violations);
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::zero_total_mass, "");
    FiniteMMSpace out = *this;
    out.weights_ = std::move(weights);
    out.total_mass_ = total;
    return out;
}

FiniteMMSpace FiniteMMSpace::normalized() const {
    std::vector<double> w = weights_;
    for (double& v : w) v /= total_mass_;
    return with_weights(std::move(w));
}

FiniteMMSpace FiniteMMSpace::subspace(std::span<const std::size_t> indices) const {
    const std::size_t k = indices.size();
    std::vector<double> d(k * k);
    std::vector<double> w(k);
    std::vector<std::string> ids(k);
    for (std::size_t a = 0; a < k; ++a) {
        if (indices[a] >= n_) throw Error(ErrorCode::invalid_input, "subspace index out of range");
        w[a] = weights_[indices[a]];
        ids[a] = ids_[indices[a]];
        for (std::size_t b = 0; b < k; ++b) d[a * k + b] = dist(indices[a], indices[b]);
    }
    return make_unchecked(k, std::move(d), std::move(w), std::move(ids));
}

FiniteMMSpace FiniteMMSpace::from_points(const std::vector<std::vector<double>>& coords,
                                         std::vector<double> weights) {
    const std::size_t n = coords.size();
    if (n == 0) throw Error(ErrorCode::invalid_input, "no points");
    const std::size_t k = coords.front().size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (coords[i].size() != k) throw Error(ErrorCode::invalid_input, "ragged coordinates");
        for (double c : coords[i]) {
            if (!std::isfinite(c)) throw Error(ErrorCode::non_finite_value, "coordinate");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                const double t = coords[i][c] - coords[j][c];
                s += t * t;
            }
            d[i * n + j] = d[j * n + i] = std::sqrt(s);
        }
    }
    return make_unchecked(n, std::move(d), std::move(weights));
}

FiniteMMSpace FiniteMMSpace::from_line(const std::vector<double>& positions,
                                       std::vector<double> weights) {
    std::vector<std::vector<double>> coords;
    coords.reserve(positions.size());
    for (double p : positions) coords.push_back({p});
    return from_points(coords, std::move(weights));
}

FiniteMMSpace FiniteMMSpace::uniform(std::vector<std::vector<double>> dist) {
    RawMMSpace raw;
    const std::size_t n = dist.size();
    raw.dist = std::move(dist);
    raw.weights.assign(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
    return validate_mmspace(raw);
}

RealMeasure1D::RealMeasure1D(std::vector<Atom> atoms) {
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.position) || !std::isfinite(a.mass)) {
            throw Error(ErrorCode::non_finite_value, "atom");
        }
        if (a.mass < 0.0) throw Error(ErrorCode::negative_entry, "atom mass");
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.position < b.position; });
    for (const Atom& a : atoms) {
        if (!atoms_.empty() && atoms_.back().position == a.position) {
            atoms_.back().mass += a.mass;
        } else {
            atoms_.push_back(a);
        }
        total_mass_ += a.mass;
    }
}

FiniteMMSpace RealMeasure1D::as_mmspace() const {
    if (atoms_.empty()) throw Error(ErrorCode::empty_measure, "");
    const std::size_t n = atoms_.size();
    std::vector<double> d(n * n, 0.0);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = atoms_[i].mass;
        for (std::size_t j = 0; j < n; ++j) {
            d[i * n + j] = std::fabs(atoms_[i].position - atoms_[j].position);
        }
    }
    return make_unchecked(n, std::move(d), std::move(w));
}

SubsetMask::SubsetMask(const FiniteMMSpace& space, std::span<const std::size_t> members)
    : bits_(space.size(), false) {
    for (std::size_t i : members) {
        if (i >= space.size()) throw Error(ErrorCode::invalid_input, "subset index out of range");
        if (!bits_[i]) {
            bits_[i] = true;
            mass_ += space.weight(i);
        }
    }
}

SubsetMask SubsetMask::from_bits(const FiniteMMSpace& space, std::vector<bool> bits) {
    if (bits.size() != space.size()) throw Error(ErrorCode::invalid_input, "mask size mismatch");
    SubsetMask out;
    out.bits_ = std::move(bits);
    for (std::size_t i = 0; i < out.bits_.size(); ++i) {
        if (out.bits_[i]) out.mass_ += space.weight(i);
    }
    return out;
}

std::size_t SubsetMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<std::size_t> SubsetMask::members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(i);
    }
    return out;
}

RealMeasure1D pushforward(const FiniteMMSpace& space, std::span<const double> values) {
    if (values.size() != space.size()) {
        throw Error(ErrorCode::invalid_input, "value count does not match space size");
    }
    std::vector<Atom> atoms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::non_finite_value, "f(" + std::to_string(i) + ")");
        }
        atoms[i] = {values[i], space.weight(i)};
    }
    return RealMeasure1D(std::move(atoms));
}

SubsetMask neighborhood(const FiniteMMSpace& space, const SubsetMask& set, double r) {
    if (set.universe_size() != space.size()) {
        throw Error(ErrorCode::invalid_input, "mask size mismatch");
    }
    const auto members = set.members();
    if (members.empty()) throw Error(ErrorCode::empty_set, "neighborhood of empty set");
    if (!(r > 0.0)) throw Error(ErrorCode::nonpositive_radius, "");
    std::vector<bool> bits(space.size(), false);
    for (std::size_t y = 0; y < space.size(); ++y) {
        for (std::size_t a : members) {
            if (space.dist(a, y) < r) {
                bits[y] = true;
                break;
            }
        }
    }
    return SubsetMask::from_bits(space, std::move(bits));
}

double set_distance(const FiniteMMSpace& space, const SubsetMask& a, const SubsetMask& b) {
    const auto ma = a.members();
    const auto mb = b.members();
    if (ma.empty() || mb.empty()) throw Error(ErrorCode::empty_set, "set distance");
    double best = INFINITY;
    for (std::size_t i : ma) {
        for (std::size_t j : mb) best = std::min(best, space.dist(i, j));
    }
    return best;
}

double ball_mass(const FiniteMMSpace& space, std::size_t center, double r) {
    double m = 0.0;
    const double* row = space.row(center);
    for (std::size_t j = 0; j < space.size(); ++j) {
        if (row[j] <= r) m += space.weight(j);
    }
    return m;
}

}  // namespace concentra
