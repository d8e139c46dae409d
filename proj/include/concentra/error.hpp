#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace concentra {

enum class ErrorCode {
    invalid_input,
    asymmetric_matrix,
    negative_entry,
    nonzero_diagonal,
    triangle_violation,
    zero_total_mass,
    non_finite_value,
    empty_set,
    deficit_exceeds_mass,
    nonpositive_kappa,
    nonpositive_radius,
    empty_measure,
    invalid_action,
    mass_hypothesis_fails,
    holder_violated,
    invalid_radii,
    hypothesis_failed,
    internal_claim_failed,
    disconnected_graph,
    not_a_tree,
    not_on_model,
    no_convergence,
    alpha_exceeds_beta,
    degenerate_moduli,
    group_too_large,
    not_a_permutation,
    disconnected,
    spec_too_large,
};

std::string_view to_string(ErrorCode code);

// Base exception for all library failures. `details` lists individual
// violations when more than one invariant is broken.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {});

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::vector<std::string> details_;
};

// Thrown when a bound's precondition does not hold; the message names the
// failing clause.
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& clause);
};

}  // namespace concentra
