#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pomega/analysis.hpp"
#include "pomega/gallery.hpp"
#include "pomega/transform.hpp"

#include <cmath>

using namespace pomega;

namespace {

Word word_of(const std::string& text, const Alphabet& alphabet)
{
    Word w;
    for (char c : text)
        w.push_back(alphabet.index(std::string(1, c)));
    return w;
}

LassoWord lasso(const std::string& stem, const std::string& loop, const Alphabet& alphabet)
{
    return {word_of(stem, alphabet), word_of(loop, alphabet)};
}

Rational pr(const ProbabilisticAutomaton& p, const std::string& stem, const std::string& loop)
{
    return acceptance_probability(p, lasso(stem, loop, p.alphabet));
}

const Rational half(1, 2);

} // namespace

TEST_CASE("lasso chain structure")
{
    const auto p = gallery::fig1_left();
    const auto chain = build_lasso_chain(p, lasso("", "a", p.alphabet));
    CHECK(chain.size() == 3);
    const auto q0 = chain.find(0, 0);
    const auto q1 = chain.find(1, 0);
    REQUIRE(q0);
    REQUIRE(q1);
    bool found = false;
    for (const auto& e : chain.edges[*q0])
        if (e.target == *q1) {
            CHECK(e.probability == half);
            found = true;
        }
    CHECK(found);

    const auto b = build_lasso_chain(p, lasso("", "b", p.alphabet));
    CHECK_FALSE(b.find(1, 0));
    REQUIRE(b.find(0, 0));
    REQUIRE(b.edges[*b.find(0, 0)].size() == 1);
    CHECK(b.edges[*b.find(0, 0)][0].target == *b.find(0, 0));
    CHECK(b.edges[*b.find(0, 0)][0].probability == 1);

    const auto pl = gallery::p_lambda(half);
    const auto dead = build_lasso_chain(pl, lasso("", "b", pl.alphabet));
    const auto start = dead.find(0, 0);
    REQUIRE(start);
    REQUIRE(dead.edges[*start].size() == 1);
    CHECK(dead.edges[*start][0].target == LassoChain::reject_node);

    CHECK_THROWS_AS(build_lasso_chain(p, LassoWord{{}, {}}), Error);
    CHECK_THROWS_AS(build_lasso_chain(p, LassoWord{{}, {5}}), Error);
}

TEST_CASE("chain rows sum to one", "[property]")
{
    oracle::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto p = oracle::random_pba(rng, 4);
        const auto chain = build_lasso_chain(p, oracle::random_lasso(rng, 2));
        for (std::size_t v = 0; v < chain.size(); ++v) {
            Rational sum = 0;
            for (const auto& e : chain.edges[v])
                sum += e.probability;
            CHECK(sum == 1);
        }
    }
}

TEST_CASE("bscc decomposition")
{
    const auto p = gallery::fig1_left();
    const auto a = bscc_decomposition(build_lasso_chain(p, lasso("", "a", p.alphabet)));
    REQUIRE(a.bsccs.size() == 1);
    CHECK(a.bsccs[0].projected_states == StateSet{1});
    CHECK(a.bsccs[0].reach_probability == 1);

    const auto b = bscc_decomposition(build_lasso_chain(p, lasso("", "b", p.alphabet)));
    REQUIRE(b.bsccs.size() == 1);
    CHECK(b.bsccs[0].projected_states == StateSet{0});
    CHECK(b.bsccs[0].reach_probability == 1);

    const auto r = gallery::fig1_right();
    const auto ac = bscc_decomposition(build_lasso_chain(r, lasso("", "ac", r.alphabet)));
    REQUIRE(ac.bsccs.size() == 1);
    CHECK(ac.bsccs[0].is_reject);
    CHECK(ac.bsccs[0].reach_probability == 1);
}

TEST_CASE("bscc reach probabilities are a sub-distribution", "[property]")
{
    oracle::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto p = oracle::random_pba(rng, 4);
        const auto d = bscc_decomposition(build_lasso_chain(p, oracle::random_lasso(rng, 2)));
        Rational total = 0;
        bool reject = false;
        for (const auto& b : d.bsccs) {
            CHECK(sgn(b.reach_probability) > 0);
            total += b.reach_probability;
            reject = reject || b.is_reject;
        }
        CHECK(total == 1);
        if (!d.bsccs.empty() && reject)
            CHECK(d.bsccs.back().is_reject);
    }
}

TEST_CASE("condition satisfaction")
{
    CHECK(condition_satisfied(Buchi{{1}}, {1}));
    CHECK_FALSE(condition_satisfied(Buchi{{1}}, {0}));
    CHECK(condition_satisfied(Rabin{{{{0}, {1}}}}, {1, 2}));
    CHECK_FALSE(condition_satisfied(Rabin{{{{0}, {1}}}}, {0, 1}));
    CHECK(condition_satisfied(Streett{{{{0}, {1}}}}, {0, 1}));
    CHECK(condition_satisfied(Streett{{{{0}, {1}}}}, {2}));
    CHECK_FALSE(condition_satisfied(Streett{{{{0}, {1}}}}, {1}));
    CHECK(condition_satisfied(Streett{}, {3}));
    CHECK_FALSE(condition_satisfied(Rabin{}, {3}));
}

TEST_CASE("acceptance probabilities of the introductory examples")
{
    const auto p = gallery::fig1_left();
    CHECK(pr(p, "ab", "a") == half);
    CHECK(pr(p, "", "a") == 1);
    const auto r = gallery::fig1_right();
    CHECK(pr(r, "acac", "ab") == Rational(1, 4));
    CHECK(pr(r, "", "ac") == 0);
    CHECK(pr(gallery::p_lambda(half), "", "ab") == 0);
}

TEST_CASE("fig1-left survives each a with probability 1/2")
{
    const auto p = gallery::fig1_left();
    for (const auto& w : oracle::all_lassos(2, 8, 0 + 1)) {
        if (w.loop != Word{0})
            continue;
        auto stem = w.stem;
        stem.push_back(1);
        const auto k = std::count(stem.begin(), stem.end(), 0);
        Rational expected = 1;
        for (long i = 0; i < k; ++i)
            expected *= half;
        CHECK(acceptance_probability(p, {stem, {0}}) == expected);
    }
}

TEST_CASE("prefix consumption")
{
    const auto pl = gallery::p_lambda(half);
    CHECK(prefix_consumption_probability(pl, word_of("ab", pl.alphabet)) == half);
    CHECK(prefix_consumption_probability(pl, word_of("aab", pl.alphabet)) == Rational(3, 4));
    CHECK(prefix_consumption_probability(pl, word_of("abaab", pl.alphabet)) == Rational(3, 8));
    CHECK(prefix_consumption_probability(pl, {}) == 1);
    CHECK(prefix_consumption_probability(gallery::fig1_right(), {}) == 1);
    CHECK_THROWS_AS(prefix_consumption_probability(pl, {7}), Error);
}

TEST_CASE("membership under the three semantics")
{
    const auto p = gallery::fig1_left();
    CHECK(member(p, lasso("", "a", p.alphabet), Semantics::almost_sure()));
    CHECK_FALSE(member(p, lasso("ab", "a", p.alphabet), Semantics::almost_sure()));
    CHECK(member(p, lasso("ab", "a", p.alphabet), Semantics::probable()));

    const auto r = gallery::fig1_right();
    const auto tenth = Semantics::threshold(Rational(1, 10));
    CHECK(member(r, lasso("acacac", "ab", r.alphabet), tenth));
    CHECK_FALSE(member(r, lasso("acacacac", "ab", r.alphabet), tenth));

    CHECK_THROWS_AS(member(p, lasso("", "a", p.alphabet), Semantics::threshold(1)), Error);
    CHECK_THROWS_AS(member(p, lasso("", "a", p.alphabet), Semantics::threshold(-1)), Error);
}

TEST_CASE("exact probabilities agree with a dense elimination oracle", "[property]")
{
    oracle::Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        auto p = oracle::random_pba(rng, 4);
        if (i % 3 == 1)
            p = with_rabin_acceptance(p);
        if (i % 3 == 2)
            p = with_streett_acceptance(p);
        const auto w = oracle::random_lasso(rng, 2);
        const auto exact = acceptance_probability(p, w);
        CHECK(exact == oracle::lasso_probability(p, w));
        CHECK(sgn(exact) >= 0);
        CHECK(exact <= 1);
        const auto q = qualitative_acceptance(p, w);
        CHECK(q.positive == (sgn(exact) > 0));
        CHECK(q.almost_sure == (exact == 1));
        CHECK(member(p, w, Semantics::probable()) == q.positive);
        CHECK(member(p, w, Semantics::almost_sure()) == q.almost_sure);
        CHECK(member(p, w, Semantics::threshold(0)) == q.positive);
        CHECK(member(p, w, Semantics::threshold(half)) == (exact > half));
    }
}

TEST_CASE("probability does not depend on the lasso representation", "[property]")
{
    oracle::Rng rng(19);
    for (int i = 0; i < 150; ++i) {
        const auto p = oracle::random_pba(rng, 4);
        const auto w = oracle::random_lasso(rng, 2, 3, 3);
        const auto base = acceptance_probability(p, w);

        LassoWord unrolled = w;
        unrolled.stem.insert(unrolled.stem.end(), w.loop.begin(), w.loop.end());
        CHECK(acceptance_probability(p, unrolled) == base);

        LassoWord doubled = w;
        doubled.loop.insert(doubled.loop.end(), w.loop.begin(), w.loop.end());
        CHECK(acceptance_probability(p, doubled) == base);

        for (std::size_t k = 1; k < w.loop.size(); ++k) {
            LassoWord rotated;
            rotated.stem = w.stem;
            rotated.stem.insert(rotated.stem.end(), w.loop.begin(), w.loop.begin() + k);
            rotated.loop.assign(w.loop.begin() + k, w.loop.end());
            rotated.loop.insert(rotated.loop.end(), w.loop.begin(), w.loop.begin() + k);
            CHECK(acceptance_probability(p, rotated) == base);
        }
    }
}

TEST_CASE("qualitative membership is determined by supports", "[property]")
{
    oracle::Rng rng(23);
    int quantitative_changes = 0;
    for (int i = 0; i < 60; ++i) {
        const auto p = oracle::random_pba(rng, 4);
        const auto q = oracle::reweight(p, rng);
        CHECK(validate_automaton(q).ok());
        for (int j = 0; j < 5; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(member(p, w, Semantics::probable()) == member(q, w, Semantics::probable()));
            CHECK(member(p, w, Semantics::almost_sure()) == member(q, w, Semantics::almost_sure()));
            const auto summary_p = bscc_summary(p, w);
            const auto summary_q = bscc_summary(q, w);
            CHECK(summary_p.bsccs == summary_q.bsccs);
            CHECK(summary_p.reject_reachable == summary_q.reject_reachable);
            quantitative_changes += acceptance_probability(p, w) != acceptance_probability(q, w);
        }
    }
    CHECK(quantitative_changes > 0);
}

TEST_CASE("nondeterministic lasso membership")
{
    const auto right = support_automaton(gallery::fig1_right());
    CHECK(nondet_lasso_member(right, lasso("", "acab", right.alphabet)));
    const auto left = support_automaton(gallery::fig1_left());
    CHECK(nondet_lasso_member(left, lasso("b", "a", left.alphabet)));
    const auto l2 = gallery::ln_nba(2);
    CHECK_FALSE(nondet_lasso_member(l2, lasso("", "ab", l2.alphabet)));
    CHECK_THROWS_AS(nondet_lasso_member(l2, LassoWord{{}, {9}}), Error);

    auto empty_init = l2;
    empty_init.initial.clear();
    CHECK_FALSE(nondet_lasso_member(empty_init, lasso("", "aabc", l2.alphabet)));
}

TEST_CASE("nondeterministic membership agrees with brute force", "[property]")
{
    oracle::Rng rng(29);
    for (int i = 0; i < 300; ++i) {
        const auto n = oracle::random_nba(rng, 5);
        const auto w = oracle::random_lasso(rng, 2, 4, 4);
        CHECK(nondet_lasso_member(n, w) == oracle::nba_accepts(n, w));
    }
}

TEST_CASE("Rabin and Streett nondeterministic membership match the run semantics", "[property]")
{
    // A pair condition on a single-run automaton (deterministic) is decided
    // by the states on its cycle; compare with the probabilistic reading of
    // the same automaton, where the run is unique.
    oracle::Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto n = oracle::pick(rng, 1, 4);
        auto d = make_nondeterministic(oracle::letters(2), oracle::state_names(n));
        for (StateId q = 0; q < n; ++q)
            for (Symbol a = 0; a < 2; ++a)
                if (!oracle::coin(rng, 0.1))
                    d.delta[q][a] = {oracle::pick(rng, 0, n - 1)};
        d.initial = {0};
        std::vector<AcceptancePair> pairs;
        for (std::size_t l = oracle::pick(rng, 0, 2); l > 0; --l)
            pairs.push_back({oracle::random_subset(rng, n, 0.3, false), oracle::random_subset(rng, n, 0.4, false)});
        d.acceptance = i % 2 ? AcceptanceCondition(Rabin{pairs}) : AcceptanceCondition(Streett{pairs});
        const auto w = oracle::random_lasso(rng, 2);
        CHECK(nondet_lasso_member(d, w) == (acceptance_probability(uniform_resolution(d), w) == 1));
    }
}

TEST_CASE("Streett membership needs a sub-component")
{
    // q0 <-> q1 on a, and q1 has a self-loop on a; one pair (H = {q0}, K = {q1}).
    // The run may stay in q1 forever (violates the pair) or alternate (fine).
    auto n = make_nondeterministic(Alphabet({"a"}), {"q0", "q1"});
    add_transition(n, 0, 0, 1);
    add_transition(n, 1, 0, 0);
    add_transition(n, 1, 0, 1);
    n.initial = {0};
    n.acceptance = Streett{{{{0}, {1}}}};
    CHECK(nondet_lasso_member(n, {{}, {0}}));
    // two pairs that can only be met by avoiding both K sets
    n.acceptance = Streett{{{{}, {0}}, {{}, {1}}}};
    CHECK_FALSE(nondet_lasso_member(n, {{}, {0}}));
    n.acceptance = Rabin{{{{0}, {1}}}};
    CHECK(nondet_lasso_member(n, {{}, {0}}));
    n.acceptance = Rabin{{{{1}, {0}}}};
    CHECK_FALSE(nondet_lasso_member(n, {{}, {0}}));
}

TEST_CASE("Monte-Carlo estimates")
{
    const auto p = gallery::fig1_left();
    const auto est = monte_carlo_estimate(p, lasso("ab", "a", p.alphabet), 100000, 7);
    CHECK(std::abs(est.estimate - 0.5) <= 0.01);
    CHECK(est.half_width == Catch::Approx(hoeffding_half_width(100000)));
    CHECK(monte_carlo_estimate(p, lasso("", "a", p.alphabet), 1000, 1).estimate == 1.0);
    const auto r = gallery::fig1_right();
    CHECK(monte_carlo_estimate(r, lasso("", "ac", r.alphabet), 1000, 1).estimate == 0.0);
    CHECK_THROWS_AS(monte_carlo_estimate(p, lasso("", "a", p.alphabet), 0, 1), Error);

    const auto again = monte_carlo_estimate(p, lasso("ab", "a", p.alphabet), 100000, 7);
    CHECK(again.accepted == est.accepted);
    CHECK(hoeffding_half_width(1) == Catch::Approx(std::sqrt(std::log(200.0) / 2)));
}
