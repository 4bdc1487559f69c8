#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pfrlab/circuit.hpp"

namespace pfrlab {

// One fiducial-germ^power-fiducial sequence. Gate entries are slots into
// GstDesign::gate_labels. germ == -1 marks a bare fiducial pair.
struct SequenceSpec {
  int id = 0;
  int prep_fid = 0;
  int germ = -1;
  int power = 0;
  int meas_fid = 0;
  std::vector<int> flat;  // prep fiducial, repeated germ, meas fiducial
};

struct GstDesign {
  std::vector<std::string> gate_labels;  // {"Gi", "Gx", "Gy"}
  std::vector<Clifford> gate_set;        // parallel to gate_labels
  std::vector<std::vector<int>> prep_fiducials;
  std::vector<std::vector<int>> meas_fiducials;
  std::vector<std::vector<int>> germs;
  std::vector<int> max_lengths;  // {1, 2, 4, ..., L_max}
  std::vector<SequenceSpec> sequences;

  CliffordCircuit circuit_of(const SequenceSpec& s) const;
  std::size_t max_flat_length() const;
};

// Germ block truncated by floor division: the germ is repeated
// floor(power / |germ|) whole times, sandwiched by the fiducials.
std::vector<int> expand(std::span<const int> prep_fid,
                        std::span<const int> germ, int power,
                        std::span<const int> meas_fid);

// Standard single-qubit long-sequence design over {Gi, Gx, Gy}: the six
// standard fiducials, the standard 11-germ set, and logarithmically spaced
// germ powers up to l_max. Deterministic; the sequence list is
// deduplicated by flat gate string, keeping first occurrence, so designs
// for smaller l_max are prefixes of designs for larger l_max.
// Throws std::invalid_argument unless l_max is a power of two (>= 1).
GstDesign standard_design(int l_max);

std::string design_to_json(const GstDesign& d);
GstDesign design_from_json(const std::string& text);
void save_design(const GstDesign& d, const std::filesystem::path& path);
GstDesign load_design(const std::filesystem::path& path);

// All flats in the pfr circuit text format, one sequence per line.
std::string design_to_circuit_text(const GstDesign& d);

}  // namespace pfrlab
