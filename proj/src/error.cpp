#include "concentra/error.hpp"

namespace concentra {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return "InvalidInput";
        case ErrorCode::asymmetric_matrix: return "AsymmetricMatrix";
        case ErrorCode::negative_entry: return "NegativeEntry";
        case ErrorCode::nonzero_diagonal: return "NonzeroDiagonal";
        case ErrorCode::triangle_violation: return "TriangleViolation";
        case ErrorCode::zero_total_mass: return "ZeroTotalMass";
        case ErrorCode::non_finite_value: return "NonFiniteValue";
        case ErrorCode::empty_set: return "EmptySet";
        case ErrorCode::deficit_exceeds_mass: return "DeficitExceedsMass";
        case ErrorCode::nonpositive_kappa: return "NonpositiveKappa";
        case ErrorCode::nonpositive_radius: return "NonpositiveRadius";
        case ErrorCode::empty_measure: return "EmptyMeasure";
        case ErrorCode::invalid_action: return "InvalidAction";
        case ErrorCode::mass_hypothesis_fails: return "MassHypothesisFails";
        case ErrorCode::holder_violated: return "HolderViolated";
        case ErrorCode::invalid_radii: return "InvalidRadii";
        case ErrorCode::hypothesis_failed: return "HypothesisFailed";
        case ErrorCode::internal_claim_failed: return "InternalClaimFailed";
        case ErrorCode::disconnected_graph: return "DisconnectedGraph";
        case ErrorCode::not_a_tree: return "NotATree";
        case ErrorCode::not_on_model: return "NotOnModel";
        case ErrorCode::no_convergence: return "NoConvergence";
        case ErrorCode::alpha_exceeds_beta: return "AlphaExceedsBeta";
        case ErrorCode::degenerate_moduli: return "DegenerateModuli";
        case ErrorCode::group_too_large: return "GroupTooLarge";
        case ErrorCode::not_a_permutation: return "NotAPermutation";
        case ErrorCode::disconnected: return "Disconnected";
        case ErrorCode::spec_too_large: return "SpecTooLarge";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message) {
    std::string out(to_string(code));
    if (!message.empty()) {
        out += ": ";
        out += message;
    }
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::vector<std::string> details)
    : std::runtime_error(compose(code, message)), code_(code), details_(std::move(details)) {}

HypothesisError::HypothesisError(const std::string& clause)
    : Error(ErrorCode::hypothesis_failed, clause) {}

}  // namespace concentra
