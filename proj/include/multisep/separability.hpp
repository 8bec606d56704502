#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "multisep/tensor_core.hpp"

namespace multisep {

/// Largest minor-system size enumerated by this library.
inline constexpr std::size_t kMaxMinorCount = std::size_t{1} << 26;

/// Identifies one 2x2 minor of the mode-`axis` unfolding:
///   S = a_k * a_l - a_{k with l[axis] at axis} * a_{l with k[axis] at axis}.
/// `axis` is 1-based. Enumerated minors satisfy k[axis] < l[axis] strictly;
/// eval_minor accepts any in-bounds pair (the formula is total).
struct MinorId {
    int axis = 0;
    MultiIndex k;
    MultiIndex l;
};

struct SeparabilityReport {
    bool separable = false;
    double max_abs_minor = 0.0;
    std::optional<MinorId> witness;  // present iff not separable; first maximizer
    double tolerance = 0.0;
};

/// Number of canonical minors: sum over axes j of C(N_j,2) * (prod_{i!=j} N_i)^2.
/// Throws CapacityError beyond kMaxMinorCount.
std::size_t minor_count(const std::vector<int>& dims);

/// Visits every canonical minor in the deterministic order: axis ascending,
/// then k row-major over the full index space, then l row-major.
void for_each_minor(const std::vector<int>& dims,
                    const std::function<void(const MinorId&)>& visit);

/// Materialized canonical enumeration, same order as for_each_minor.
std::vector<MinorId> enumerate_minors(const std::vector<int>& dims);

cxd eval_minor(const StateTensor& state, const MinorId& id);

/// One streaming pass over all canonical minors of the given amplitudes.
struct MinorScan {
    std::size_t count = 0;
    double sum_sq = 0.0;     // sum of |S|^2
    double max_abs = 0.0;
    MinorId argmax;          // first maximizer in canonical order; the first
                             // minor when every minor vanishes
};

MinorScan scan_minors(const StateTensor& state);

/// Decides product-state membership: the state is separable iff every minor
/// of the normalized amplitudes has magnitude at most `tol`.
SeparabilityReport is_separable(const StateTensor& state, double tol = 1e-10);

/// Independent check: true iff every single-axis matricization has numerical
/// rank one (second singular value <= tol * first). Vacuously true for m = 1.
bool rank_one_oracle(const StateTensor& state, double tol = 1e-10);

}  // namespace multisep
