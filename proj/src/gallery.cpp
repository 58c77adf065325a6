#include "pomega/gallery.hpp"

#include <algorithm>

namespace pomega::gallery {

namespace {

const Rational half(1, 2);

} // namespace

ProbabilisticAutomaton fig1_left()
{
    auto p = make_probabilistic(Alphabet({"a", "b"}), {"q0", "q1"});
    add_transition(p, 0, 0, 0, half);
    add_transition(p, 0, 0, 1, half);
    add_transition(p, 0, 1, 0, Rational(1));
    add_transition(p, 1, 0, 1, Rational(1));
    p.initial[0] = 1;
    p.acceptance = Buchi{{1}};
    return p;
}

ProbabilisticAutomaton fig1_right()
{
    auto p = make_probabilistic(Alphabet({"a", "b", "c"}), {"p0", "p1", "p2"});
    add_transition(p, 0, 0, 1, half);
    add_transition(p, 0, 0, 2, half);
    add_transition(p, 1, 1, 0, Rational(1));
    add_transition(p, 2, 1, 0, Rational(1));
    add_transition(p, 2, 2, 0, Rational(1));
    p.initial[0] = 1;
    p.acceptance = Buchi{{1}};
    return p;
}

ProbabilisticAutomaton p_lambda(const Rational& lambda)
{
    if (sgn(lambda) <= 0 || lambda >= 1)
        throw Error("p-lambda needs 0 < lambda < 1, got " + to_string(lambda));
    auto p = make_probabilistic(Alphabet({"a", "b"}), {"q0", "q1"});
    add_transition(p, 0, 0, 0, lambda);
    add_transition(p, 0, 0, 1, 1 - lambda);
    add_transition(p, 1, 0, 1, Rational(1));
    add_transition(p, 1, 1, 0, Rational(1));
    p.initial[0] = 1;
    p.acceptance = Buchi{{0}};
    return p;
}

ProbabilisticAutomaton lprime_pba(std::size_t n)
{
    if (n == 0)
        throw Error("lprime-pba needs n >= 1");
    // state k_c (1-based k, committed letter c) has index c*n + (k-1)
    auto id = [n](std::size_t c, std::size_t k) { return c * n + (k - 1); };
    std::vector<std::string> names;
    for (const char* c : {"a", "b"})
        for (std::size_t k = 1; k <= n; ++k)
            names.push_back(std::to_string(k) + "_" + c);
    auto p = make_probabilistic(Alphabet({"a", "b"}), std::move(names));

    if (n == 1) {
        // No state has room for a restart, so 1_b doubles as the waiting state:
        // it keeps b and moves to 1_a on a with probability 1/2.
        add_transition(p, id(0, 1), 0, id(0, 1), Rational(1));
        add_transition(p, id(1, 1), 1, id(1, 1), Rational(1));
        add_transition(p, id(1, 1), 0, id(0, 1), half);
        add_transition(p, id(1, 1), 0, id(1, 1), half);
    } else {
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t k = 1; k < n; ++k)
                for (std::size_t letter = 0; letter < 2; ++letter) {
                    add_transition(p, id(c, k), letter, id(c, k + 1), half);
                    add_transition(p, id(c, k), letter, id(letter, 1), half);
                }
            add_transition(p, id(c, n), c, id(c, 1), Rational(1));
        }
    }
    p.initial[id(0, 1)] = half;
    p.initial[id(1, 1)] = half;
    p.acceptance = Buchi{all_states(2 * n)};
    return p;
}

NondeterministicAutomaton ln_nba(std::size_t n)
{
    if (n == 0)
        throw Error("ln-nba needs n >= 1");
    std::vector<std::string> names;
    for (std::size_t i = 0; i <= n + 1; ++i)
        names.push_back("s" + std::to_string(i));
    auto nba = make_nondeterministic(Alphabet({"a", "b", "c"}), std::move(names));
    add_transition(nba, 0, 0, 0);
    add_transition(nba, 0, 0, 1);
    add_transition(nba, 0, 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        add_transition(nba, i, 0, i + 1);
        add_transition(nba, i, 1, i + 1);
    }
    add_transition(nba, n + 1, 2, 0);
    nba.initial = {0};
    nba.acceptance = Buchi{{n + 1}};
    return nba;
}

const std::vector<std::string>& names()
{
    static const std::vector<std::string> all{"fig1-left", "fig1-right", "p-lambda", "lprime-pba", "ln-nba"};
    return all;
}

Automaton build(const Spec& spec)
{
    const bool wants_lambda = spec.name == "p-lambda";
    const bool wants_n = spec.name == "lprime-pba" || spec.name == "ln-nba";
    if (std::find(names().begin(), names().end(), spec.name) == names().end())
        throw Error("unknown gallery automaton '" + spec.name + "'");
    if (wants_lambda != spec.lambda.has_value())
        throw Error(spec.name + (wants_lambda ? " needs" : " takes no") + " lambda parameter");
    if (wants_n != spec.n.has_value())
        throw Error(spec.name + (wants_n ? " needs" : " takes no") + " n parameter");

    if (spec.name == "fig1-left")
        return fig1_left();
    if (spec.name == "fig1-right")
        return fig1_right();
    if (spec.name == "p-lambda")
        return p_lambda(*spec.lambda);
    if (spec.name == "lprime-pba")
        return lprime_pba(*spec.n);
    return ln_nba(*spec.n);
}

} // namespace pomega::gallery
