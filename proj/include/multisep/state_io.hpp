#pragma once

#include <string>

#include "multisep/mixed_roof.hpp"
#include "multisep/multilinear.hpp"
#include "multisep/tensor_core.hpp"

namespace multisep {

/// JSON file formats. A state file is one object
///   {"format": "multisep-state/1", "dims": [...], "amplitudes": [[re, im], ...]}
/// with amplitudes in the global flattening order. A density file uses
/// "multisep-density/1" with a row-major "matrix" of [re, im] pairs and is
/// validated (Hermitian / positive / unit trace) on read. A multilinear-map
/// file is a state file with an extra "target_dim" field; "amplitudes" then
/// holds the coefficient array (target index fastest).
///
/// Structural problems raise FormatError naming the field; a density file
/// that fails the physical validation raises ArgumentError.
StateTensor read_state(const std::string& path);
void write_state(const StateTensor& state, const std::string& path);

DensityMatrix read_density(const std::string& path);
void write_density(const DensityMatrix& rho, const std::string& path);

MultilinearMap read_map(const std::string& path);
void write_map(const MultilinearMap& map, const std::string& path);

}  // namespace multisep
