#pragma once

#include "pomega/core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pomega::gallery {

/// P over {a, b}: q0 -a-> q0/q1 with 1/2 each, q0 -b-> q0, q1 -a-> q1; F = {q1}.
ProbabilisticAutomaton fig1_left();

/// P' over {a, b, c}: p0 -a-> p1/p2 with 1/2 each, p1 -b-> p0, p2 -b,c-> p0;
/// F = {p1}.
ProbabilisticAutomaton fig1_right();

/// P_λ over {a, b}: q0 -a-> q0 (λ) / q1 (1-λ), q1 -a-> q1, q1 -b-> q0; F = {q0}.
/// Requires 0 < λ < 1.
ProbabilisticAutomaton p_lambda(const Rational& lambda);

/// 2n-state PBA accepting x·y^ω with |y| = n under the probable semantics.
/// All states are accepting; runs reject by dying. Requires n >= 1.
ProbabilisticAutomaton lprime_pba(std::size_t n);

/// (n+2)-state NBA for ((a+b)^* a (a+b)^n c)^ω with F = {s_{n+1}}.
NondeterministicAutomaton ln_nba(std::size_t n);

struct Spec {
    std::string name; ///< fig1-left, fig1-right, p-lambda, lprime-pba, ln-nba
    std::optional<Rational> lambda;
    std::optional<std::size_t> n;
};

using Automaton = std::variant<ProbabilisticAutomaton, NondeterministicAutomaton>;

/// Throws Error on an unknown name or missing/extra/out-of-range parameters.
Automaton build(const Spec& spec);

const std::vector<std::string>& names();

} // namespace pomega::gallery
