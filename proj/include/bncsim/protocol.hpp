#pragma once

#include <cstdint>
#include <span>

#include "bncsim/detector_balanced.hpp"
#include "bncsim/phase.hpp"
#include "bncsim/rng.hpp"

namespace bncsim {

Phase choose_alice_phase(Rng& rng);

// Bob's interferometer selects a basis: 0 (basis 0) or pi/2 (basis 1).
Phase choose_bob_phase(Rng& rng);

Basis choose_basis(Rng& rng);

struct BitOutcome {
  int bit = 0;
  bool error = false;
};

// APD1 <-> phase difference 0 <-> bit 0; APD2 <-> difference pi <-> bit 1.
// Throws NotSiftable when the bases differ or there is no click.
BitOutcome click_to_bit(BaselineClick click, Basis bob_basis, Phase alice_phase);

struct SiftingRecord {
  std::uint64_t gate_index = 0;
  Phase alice_phase = Phase::Zero;
  Phase bob_phase = Phase::Zero;
  BaselineClick click = BaselineClick::NoClick;
  bool kept = false;
  bool error = false;

  Basis alice_basis() const { return basis_of(alice_phase); }
  Basis bob_basis() const { return basis_of(bob_phase); }
};

// Fills kept/error from the phases and the click.
SiftingRecord make_record(std::uint64_t gate_index, Phase alice_phase, Phase bob_phase,
                          BaselineClick click);

struct QberSummary {
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  double qber = 0.0;
};

// Throws EmptySiftedKey when nothing was kept.
QberSummary sift_and_score(std::span<const SiftingRecord> records);

/// Streaming form of sift_and_score for runs too long to keep every record.
class SiftingTally {
 public:
  void add(const SiftingRecord& record) {
    if (!record.kept) return;
    ++sifted_;
    if (record.error) ++errors_;
  }
  void merge(const SiftingTally& other) {
    sifted_ += other.sifted_;
    errors_ += other.errors_;
  }
  std::uint64_t sifted() const { return sifted_; }
  std::uint64_t errors() const { return errors_; }
  QberSummary summary() const;

 private:
  std::uint64_t sifted_ = 0;
  std::uint64_t errors_ = 0;
};

}  // namespace bncsim
