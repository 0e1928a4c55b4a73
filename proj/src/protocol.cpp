#include "bncsim/protocol.hpp"

#include <random>

#include "bncsim/errors.hpp"

namespace bncsim {

Phase choose_alice_phase(Rng& rng) {
  return phase_from_quarter_turns(std::uniform_int_distribution<int>(0, 3)(rng));
}

Basis choose_basis(Rng& rng) {
  return static_cast<Basis>(std::uniform_int_distribution<int>(0, 1)(rng));
}

Phase choose_bob_phase(Rng& rng) { return encode(choose_basis(rng), 0); }

BitOutcome click_to_bit(BaselineClick click, Basis bob_basis, Phase alice_phase) {
  if (basis_of(alice_phase) != bob_basis) throw NotSiftable("Alice and Bob used different bases");
  if (click == BaselineClick::NoClick) throw NotSiftable("no click to sift");
  const int bit = click == BaselineClick::Click1 ? 0 : 1;
  return {bit, bit != bit_of(alice_phase)};
}

SiftingRecord make_record(std::uint64_t gate_index, Phase alice_phase, Phase bob_phase,
                          BaselineClick click) {
  SiftingRecord r{gate_index, alice_phase, bob_phase, click, false, false};
  r.kept = r.alice_basis() == r.bob_basis() && click != BaselineClick::NoClick;
  if (r.kept) r.error = click_to_bit(click, r.bob_basis(), alice_phase).error;
  return r;
}

QberSummary SiftingTally::summary() const {
  if (sifted_ == 0) throw EmptySiftedKey("no record survived sifting");
  return {sifted_, errors_, static_cast<double>(errors_) / static_cast<double>(sifted_)};
}

QberSummary sift_and_score(std::span<const SiftingRecord> records) {
  SiftingTally tally;
  for (const auto& r : records) tally.add(r);
  return tally.summary();
}

}  // namespace bncsim
