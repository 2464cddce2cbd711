#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "matchbound/core_model.hpp"
#include "matchbound/f_recursion.hpp"

namespace matchbound {

// Parameters (n, N, x0) of one adversarial construction.
struct AdversaryParams {
  std::size_t n = 1;
  std::uint64_t N = 1;
  double x0 = 0.0;
  FParams fparams;

  // (1/eps)^n, throwing DomainError on overflow.
  static std::uint64_t minimal_vertices(std::size_t n, std::size_t inv_eps);

  // Validates n ≥ 1, x0 ∈ [0,1] and N a positive multiple of (1/eps)^n.
  // N = 0 selects the minimal size.
  static AdversaryParams make(std::size_t n, const FParams& fparams, double x0 = 0.0, std::uint64_t N = 0);
};

enum class Color : std::uint8_t { white, black };

inline Color opposite(Color c) { return c == Color::white ? Color::black : Color::white; }

// One step of the construction on one partition. Base steps carry
// Branch::none and no expression values.
struct StepRecord {
  std::size_t partition = 0;
  std::size_t steps_remaining = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  double a = 0.0;       // new mass on A×B divided by |B|
  double a_grid = 0.0;  // a rounded down to the grid, used for the branch test
  double x_before = 0.0;
  double x_after = 0.0;
  BranchValues expressions;
  Branch branch = Branch::none;
  std::size_t spawned_partition = 0;  // id of B's partition on the aggressive branch
};

struct PartitionSnapshot {
  std::size_t partition = 0;
  std::size_t size = 0;
  std::size_t steps_remaining = 0;
};

struct Transcript {
  AdversaryParams params;
  std::string algorithm;

  // Filled only when events are recorded.
  std::vector<ArrivalEvent> events;
  std::vector<AlgorithmDecision> decisions;

  std::vector<StepRecord> steps;
  std::vector<PartitionSnapshot> partition_sizes;
  std::vector<std::pair<VertexId, VertexId>> deactivations;
  std::vector<Color> colors;

  // Σ x_v over inactive vertices, accumulated when each pair is deactivated.
  double lazy_inactive_sum = 0.0;
  double v_alg = 0.0;
  double alg_total = 0.0;
  std::uint64_t opt_size = 0;
  // F_n(x0)·N for the grid F_n.
  double value_bound = 0.0;

  double ratio() const { return opt_size == 0 ? 0.0 : alg_total / static_cast<double>(opt_size); }
};

// {params: {n, N, eps, gamma, grid_step, x0}, algorithm, events, decisions,
//  branches, deactivations, colors, partition_sizes, v_alg, alg_total,
//  opt_size, bound}.
void write_transcript_json(std::ostream& out, const Transcript& transcript, int indent = 1);

}  // namespace matchbound
