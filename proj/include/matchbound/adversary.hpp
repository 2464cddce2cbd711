#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "matchbound/core_model.hpp"
#include "matchbound/f_recursion.hpp"
#include "matchbound/transcript.hpp"

namespace matchbound {

struct PartitionState {
  std::size_t id = 0;
  std::vector<VertexId> members;  // ascending ids
  Color color = Color::white;
  std::size_t steps_remaining = 0;
};

struct AdversaryOptions {
  // Present each batch one vertex at a time instead of as one simultaneous event.
  bool serialize_batches = false;
  // Keep every event and decision in the transcript.
  bool record_events = true;
  // Creating more vertices or edges than this throws BudgetExceeded.
  std::uint64_t max_vertices = 4'000'000;
  std::uint64_t max_edges = 60'000'000;
};

// A construction in progress: the revealed graph, the active partitions and
// the transcript so far. The algorithm is borrowed for the lifetime of the
// object.
class Construction {
public:
  // Initialization: N isolated vertices in one white partition with
  // steps_remaining = n. With x0 = 0 they arrive one at a time with no
  // edges; otherwise the algorithm chooses their portions.
  Construction(const AdversaryParams& params, OnlineAlgorithm& alg, AdversaryOptions options = {});

  const MatchState& state() const noexcept { return state_; }
  const std::vector<PartitionState>& active() const noexcept { return active_; }
  const Transcript& transcript() const noexcept { return transcript_; }

  // Requires steps_remaining = 1. Adds |A| vertices joined to all of A,
  // then retires A ∪ B in index-aligned pairs.
  void base_step(std::size_t partition_id);

  // Requires steps_remaining = k > 1 and prev.n = k − 1. Adds ε|A| vertices
  // joined to all of A and branches on the observed a. Returns the id of the
  // partition spawned from B on the aggressive branch, or nothing.
  std::optional<std::size_t> recursive_step(std::size_t partition_id, const FGrid& prev);

  // Records sizes of all active partitions.
  void snapshot_sizes();

  // Requires no active partition. Fills v_alg, alg_total and opt_size.
  void finish();

  Transcript release_transcript() && { return std::move(transcript_); }
  MatchState release_state() && { return std::move(state_); }

private:
  PartitionState& find(std::size_t id);
  std::vector<VertexId> present_block(const PartitionState& partition, std::size_t count, double* mass);
  void deactivate(VertexId u, VertexId v);

  AdversaryParams params_;
  OnlineAlgorithm& alg_;
  AdversaryOptions options_;
  MatchState state_;
  std::vector<PartitionState> active_;
  std::vector<char> inactive_;
  std::size_t next_partition_ = 0;
  std::uint64_t edges_ = 0;
  Transcript transcript_;
};

struct RunResult {
  Transcript transcript;
  MatchState state;
};

// Full run: initialization, n − 1 rounds of recursive steps over every active
// partition, then base steps. `grids` must hold F_1, ..., F_n for params.fparams.
RunResult run_construction(const AdversaryParams& params, OnlineAlgorithm& alg, std::span<const FGrid> grids,
                           const AdversaryOptions& options = {});

// Same, computing the grids first.
RunResult run_construction(const AdversaryParams& params, OnlineAlgorithm& alg,
                           const AdversaryOptions& options = {});

struct StructureReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t pairs = 0;
  double max_portion = 0.0;
};

// Verifies the 2-coloring over all edges, that the deactivation pairs form a
// perfect matching of edges, divisibility of every recorded partition size
// and x_v ≤ 1. Throws StructureViolation naming the first failing claim.
StructureReport check_structure(const Transcript& transcript, const MatchState& state);

}  // namespace matchbound
