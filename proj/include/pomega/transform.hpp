#pragma once

#include "pomega/core.hpp"

#include <string>
#include <vector>

namespace pomega {

/// Sizes follow the usual convention: states, plus pairs for Rabin/Streett.
struct TransformReport {
    std::string construction;
    std::size_t input_states = 0;
    std::size_t input_pairs = 0;
    std::size_t output_states = 0;
    std::size_t output_pairs = 0;
    std::vector<std::string> notes;

    std::size_t input_size() const { return input_states + input_pairs; }
    std::size_t output_size() const { return output_states + output_pairs; }
};

/// Multiplicative constant c in the psa_to_pba bound c·ℓ²·|Q| (ℓ ≥ 1).
inline constexpr std::size_t psa_size_constant = 3;

/// Disjoint union with halved initial mass; Büchi set F1 ∪ F2.
ProbabilisticAutomaton union_of(const ProbabilisticAutomaton& lhs, const ProbabilisticAutomaton& rhs,
                                TransformReport* report = nullptr);

/// Synchronous product with Streett pairs [(F1×Q2, Q), (Q1×F2, Q)].
ProbabilisticAutomaton product_streett(const ProbabilisticAutomaton& lhs, const ProbabilisticAutomaton& rhs,
                                       TransformReport* report = nullptr);

/// psa_to_pba(product_streett(lhs, rhs)).
ProbabilisticAutomaton intersection(const ProbabilisticAutomaton& lhs, const ProbabilisticAutomaton& rhs,
                                    TransformReport* report = nullptr);

/// Language-equivalent NBA that is deterministic in the limit: a copy of the
/// input without accepting states, plus a deterministic breakpoint component
/// over pairs (S, B) entered by guessing a single successor.
NondeterministicAutomaton limit_determinize(const NondeterministicAutomaton& nba, TransformReport* report = nullptr);

/// Every state reachable from an accepting state has at most one successor
/// per letter.
bool is_limit_deterministic(const NondeterministicAutomaton& nba);

/// uniform_resolution(limit_determinize(nba)).
ProbabilisticAutomaton nba_to_pba(const NondeterministicAutomaton& nba, TransformReport* report = nullptr);

/// Main copy plus one commitment copy per pair, restricted to Q∖H_l with
/// Büchi set K_l. At most (ℓ+1)·|Q| states.
ProbabilisticAutomaton pra_to_pba(const ProbabilisticAutomaton& pra, TransformReport* report = nullptr);

/// Main copy plus a committed copy that cycles a pointer through the pairs.
/// At most (2ℓ+1)·|Q| ≤ psa_size_constant·ℓ²·|Q| states; |Q| when ℓ = 0.
ProbabilisticAutomaton psa_to_pba(const ProbabilisticAutomaton& psa, TransformReport* report = nullptr);

/// 0/1 PRA simulating up to n sample runs of an n-state PBA. Accepts a word
/// with probability 1 if the PBA accepts it with positive probability, and
/// with probability 0 otherwise. Has no dead rows.
ProbabilisticAutomaton pba_to_zero_one_pra(const ProbabilisticAutomaton& pba, TransformReport* report = nullptr);

/// psa_to_pba(dualize_pairs(pba_to_zero_one_pra(pba))).
ProbabilisticAutomaton complement(const ProbabilisticAutomaton& pba, TransformReport* report = nullptr);

} // namespace pomega
