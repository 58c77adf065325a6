#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pomega/analysis.hpp"
#include "pomega/gallery.hpp"
#include "pomega/transform.hpp"

using namespace pomega;

namespace {

LassoWord lasso(const std::string& stem, const std::string& loop, const Alphabet& alphabet)
{
    LassoWord w;
    for (char c : stem)
        w.stem.push_back(alphabet.index(std::string(1, c)));
    for (char c : loop)
        w.loop.push_back(alphabet.index(std::string(1, c)));
    return w;
}

bool probable(const ProbabilisticAutomaton& p, const LassoWord& w) { return member(p, w, Semantics::probable()); }

// Fixed seeded regression lassos.
std::vector<LassoWord> regression(std::size_t alphabet, std::size_t count = 50)
{
    oracle::Rng rng(1234);
    std::vector<LassoWord> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(oracle::random_lasso(rng, alphabet, 4, 4));
    return out;
}

ProbabilisticAutomaton universal_one_state()
{
    auto p = make_probabilistic(Alphabet({"a", "b"}), {"u"});
    add_transition(p, 0, 0, 0, Rational(1));
    add_transition(p, 0, 1, 0, Rational(1));
    p.initial[0] = 1;
    p.acceptance = Buchi{{0}};
    return p;
}

// Deterministic Büchi automaton for (a^*b)^ω.
NondeterministicAutomaton infinitely_many_b()
{
    auto d = make_nondeterministic(Alphabet({"a", "b"}), {"wait", "seen"});
    for (StateId q = 0; q < 2; ++q) {
        add_transition(d, q, 0, 0);
        add_transition(d, q, 1, 1);
    }
    d.initial = {0};
    d.acceptance = Buchi{{1}};
    return d;
}

std::vector<ProbabilisticAutomaton> regression_pbas()
{
    return {gallery::fig1_left(), gallery::p_lambda(Rational(1, 2)), universal_one_state(),
            gallery::lprime_pba(2)};
}

} // namespace

TEST_CASE("union")
{
    const auto p = gallery::fig1_left();
    const auto half = gallery::p_lambda(Rational(1, 2));
    TransformReport report;
    const auto pp = union_of(p, p, &report);
    CHECK(validate_automaton(pp).ok());
    CHECK(report.output_states == 4);
    CHECK(report.output_states == pp.num_states());
    CHECK(acceptance_probability(pp, lasso("", "a", p.alphabet)) == 1);
    CHECK(acceptance_probability(union_of(p, half), lasso("", "a", p.alphabet)) == Rational(1, 2));
    CHECK(acceptance_probability(pp, lasso("", "b", p.alphabet)) == 0);

    CHECK_THROWS_AS(union_of(p, gallery::fig1_right()), Error);
    CHECK_THROWS_AS(union_of(p, with_rabin_acceptance(p)), Error);
}

TEST_CASE("product")
{
    const auto p = gallery::fig1_left();
    TransformReport report;
    const auto pp = product_streett(p, p, &report);
    CHECK(validate_automaton(pp).ok());
    CHECK(pair_count(pp.acceptance) == 2);
    CHECK(report.output_size() == pp.num_states() + 2);
    CHECK(acceptance_probability(pp, lasso("ab", "a", p.alphabet)) == Rational(1, 4));
    CHECK(acceptance_probability(pp, lasso("", "a", p.alphabet)) == 1);
    CHECK(acceptance_probability(pp, lasso("", "b", p.alphabet)) == 0);
    CHECK_THROWS_AS(product_streett(p, gallery::fig1_right()), Error);
}

TEST_CASE("union is linear and product is multiplicative", "[property]")
{
    oracle::Rng rng(41);
    for (int i = 0; i < 80; ++i) {
        const auto a = oracle::random_pba(rng, 3);
        const auto b = oracle::random_pba(rng, 3);
        const auto u = union_of(a, b);
        const auto x = product_streett(a, b);
        for (int j = 0; j < 5; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            const auto pa = acceptance_probability(a, w);
            const auto pb = acceptance_probability(b, w);
            CHECK(acceptance_probability(u, w) == (pa + pb) / 2);
            CHECK(acceptance_probability(x, w) == pa * pb);
            CHECK(oracle::lasso_probability(x, w) == pa * pb);
        }
    }
}

TEST_CASE("embeddings preserve probabilities", "[property]")
{
    oracle::Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        const auto p = oracle::random_pba(rng, 4);
        const auto w = oracle::random_lasso(rng, 2);
        const auto base = acceptance_probability(p, w);
        CHECK(acceptance_probability(with_rabin_acceptance(p), w) == base);
        CHECK(acceptance_probability(with_streett_acceptance(p), w) == base);
    }
}

TEST_CASE("limit determinization")
{
    const auto right = support_automaton(gallery::fig1_right());
    const auto det = limit_determinize(right);
    CHECK(is_limit_deterministic(det));
    CHECK(nondet_lasso_member(det, lasso("", "acab", det.alphabet)));
    CHECK_FALSE(nondet_lasso_member(det, lasso("", "ac", det.alphabet)));
    // all accepting states live in the added component
    for (StateId q : final_states(det.acceptance))
        CHECK(q >= right.num_states());
    CHECK_THROWS_AS(limit_determinize(with_rabin_acceptance(right)), Error);

    const auto dba = infinitely_many_b();
    const auto dba_det = limit_determinize(dba);
    for (const auto& w : regression(2))
        CHECK(nondet_lasso_member(dba_det, w) == nondet_lasso_member(dba, w));
}

TEST_CASE("limit determinism check")
{
    CHECK(is_limit_deterministic(support_automaton(gallery::fig1_left())));
    CHECK_FALSE(is_limit_deterministic(support_automaton(gallery::fig1_right())));
    CHECK(is_limit_deterministic(infinitely_many_b()));
    CHECK_FALSE(is_limit_deterministic(gallery::ln_nba(2)));
}

TEST_CASE("limit determinization preserves the language", "[property]")
{
    oracle::Rng rng(47);
    for (int i = 0; i < 150; ++i) {
        const auto n = oracle::random_nba(rng, 4);
        const auto det = limit_determinize(n);
        REQUIRE(is_limit_deterministic(det));
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(oracle::nba_accepts(det, w) == oracle::nba_accepts(n, w));
        }
    }
}

TEST_CASE("NBA to PBA")
{
    const auto right = support_automaton(gallery::fig1_right());
    const auto w = lasso("", "acab", right.alphabet);
    CHECK(probable(nba_to_pba(right), w));
    CHECK_FALSE(probable(uniform_resolution(right), w));

    const auto l2 = gallery::ln_nba(2);
    CHECK(probable(nba_to_pba(l2), lasso("", "aabc", l2.alphabet)));

    const auto dba = infinitely_many_b();
    const auto p = nba_to_pba(dba);
    for (const auto& x : regression(2))
        CHECK(probable(p, x) == nondet_lasso_member(dba, x));

    auto none = dba;
    none.initial.clear();
    CHECK_THROWS_AS(nba_to_pba(none), Error);
}

TEST_CASE("limit-deterministic automata need no determinization", "[property]")
{
    oracle::Rng rng(53);
    int checked = 0;
    for (int i = 0; i < 400 && checked < 60; ++i) {
        const auto n = oracle::random_nba(rng, 4);
        if (!is_limit_deterministic(n))
            continue;
        ++checked;
        const auto p = uniform_resolution(n);
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(probable(p, w) == oracle::nba_accepts(n, w));
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("Rabin to Büchi")
{
    for (const auto& p : regression_pbas()) {
        TransformReport report;
        const auto b = pra_to_pba(with_rabin_acceptance(p), &report);
        CHECK(validate_automaton(b).ok());
        CHECK(b.num_states() <= 2 * p.num_states());
        CHECK(report.output_states == b.num_states());
        for (const auto& w : regression(2))
            CHECK(probable(b, w) == probable(p, w));
    }
    CHECK_THROWS_AS(pra_to_pba(gallery::fig1_left()), Error);
}

TEST_CASE("Rabin to Büchi on random automata", "[property]")
{
    oracle::Rng rng(59);
    for (int i = 0; i < 120; ++i) {
        auto p = oracle::random_pba(rng, 4);
        std::vector<AcceptancePair> pairs;
        const auto l = oracle::pick(rng, 0, 3);
        for (std::size_t k = 0; k < l; ++k)
            pairs.push_back({oracle::random_subset(rng, p.num_states(), 0.3, false),
                             oracle::random_subset(rng, p.num_states(), 0.4, false)});
        p.acceptance = Rabin{pairs};
        const auto b = pra_to_pba(p);
        CHECK(b.num_states() <= (l + 1) * p.num_states());
        CHECK(validate_automaton(b).ok());
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(probable(b, w) == (sgn(oracle::lasso_probability(p, w)) > 0));
        }
    }
}

TEST_CASE("Streett to Büchi")
{
    for (const auto& p : regression_pbas()) {
        TransformReport report;
        const auto b = psa_to_pba(with_streett_acceptance(p), &report);
        CHECK(validate_automaton(b).ok());
        CHECK(b.num_states() <= psa_size_constant * p.num_states());
        CHECK(report.output_states == b.num_states());
        const auto square = psa_to_pba(product_streett(p, p));
        for (const auto& w : regression(2)) {
            CHECK(probable(b, w) == probable(p, w));
            CHECK(probable(square, w) == probable(p, w));
        }
    }
    CHECK_THROWS_AS(psa_to_pba(gallery::fig1_left()), Error);

    // no pairs: accept iff a death-free BSCC is reachable
    oracle::Rng rng(61);
    for (int i = 0; i < 60; ++i) {
        auto p = oracle::random_pba(rng, 4);
        p.acceptance = Streett{};
        const auto b = psa_to_pba(p);
        CHECK(b.num_states() == p.num_states());
        const auto w = oracle::random_lasso(rng, 2);
        const auto summary = bscc_summary(p, w);
        CHECK(probable(b, w) == !summary.bsccs.empty());
    }
}

TEST_CASE("Streett to Büchi on random automata", "[property]")
{
    oracle::Rng rng(67);
    for (int i = 0; i < 120; ++i) {
        auto p = oracle::random_pba(rng, 4);
        std::vector<AcceptancePair> pairs;
        const auto l = oracle::pick(rng, 1, 3);
        for (std::size_t k = 0; k < l; ++k)
            pairs.push_back({oracle::random_subset(rng, p.num_states(), 0.3, false),
                             oracle::random_subset(rng, p.num_states(), 0.4, false)});
        p.acceptance = Streett{pairs};
        const auto b = psa_to_pba(p);
        CHECK(b.num_states() <= psa_size_constant * l * l * p.num_states());
        CHECK(validate_automaton(b).ok());
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(probable(b, w) == (sgn(oracle::lasso_probability(p, w)) > 0));
        }
    }
}

TEST_CASE("zero-one Rabin automaton")
{
    const auto p = gallery::fig1_left();
    TransformReport report;
    const auto z = pba_to_zero_one_pra(p, &report);
    CHECK(validate_automaton(z).ok());
    CHECK(std::holds_alternative<Rabin>(z.acceptance));
    CHECK(report.output_size() == z.num_states() + pair_count(z.acceptance));
    CHECK(acceptance_probability(z, lasso("ab", "a", p.alphabet)) == 1);
    CHECK(acceptance_probability(z, lasso("", "b", p.alphabet)) == 0);
    // no dead rows
    for (const auto& rows : z.delta)
        for (const auto& row : rows)
            CHECK_FALSE(row.empty());

    oracle::Rng rng(71);
    for (const auto& g : regression_pbas()) {
        const auto zg = pba_to_zero_one_pra(g);
        for (int i = 0; i < 100; ++i) {
            const auto w = oracle::random_lasso(rng, 2);
            const auto x = acceptance_probability(zg, w);
            CHECK((x == 0 || x == 1));
            CHECK((x == 1) == probable(g, w));
        }
    }
    CHECK_THROWS_AS(pba_to_zero_one_pra(with_rabin_acceptance(p)), Error);
}

TEST_CASE("zero-one law on random automata", "[property]")
{
    oracle::Rng rng(73);
    for (int i = 0; i < 60; ++i) {
        const auto p = oracle::random_pba(rng, 3);
        const auto z = pba_to_zero_one_pra(p);
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            const auto x = acceptance_probability(z, w);
            CHECK((x == 0 || x == 1));
            CHECK((x == 1) == (sgn(oracle::lasso_probability(p, w)) > 0));
        }
    }
}

TEST_CASE("complement")
{
    const auto p = gallery::fig1_left();
    const auto c = complement(p);
    CHECK(validate_automaton(c).ok());
    CHECK(probable(c, lasso("", "b", p.alphabet)));
    CHECK_FALSE(probable(c, lasso("ab", "a", p.alphabet)));
    for (const auto& w : regression(2))
        CHECK(probable(p, w) != probable(c, w));

    const auto u = universal_one_state();
    const auto cu = complement(u);
    for (const auto& w : regression(2))
        CHECK_FALSE(probable(cu, w));

    // double complement stays small enough only for tiny inputs
    const auto ccu = complement(cu);
    for (const auto& w : regression(2))
        CHECK(probable(ccu, w));

    auto only_a = make_probabilistic(Alphabet({"a", "b"}), {"x"});
    add_transition(only_a, 0, 0, 0, Rational(1));
    only_a.initial[0] = 1;
    only_a.acceptance = Buchi{{0}};
    const auto cc = complement(complement(only_a));
    for (const auto& w : regression(2))
        CHECK(probable(cc, w) == probable(only_a, w));
}

TEST_CASE("intersection")
{
    const auto p = gallery::fig1_left();
    const auto pp = intersection(p, p);
    const auto pc = intersection(p, complement(p));
    const auto pu = intersection(p, universal_one_state());
    for (const auto& w : regression(2)) {
        CHECK(probable(pp, w) == probable(p, w));
        CHECK_FALSE(probable(pc, w));
        CHECK(probable(pu, w) == probable(p, w));
    }
}

TEST_CASE("intersection on random automata", "[property]")
{
    oracle::Rng rng(79);
    for (int i = 0; i < 60; ++i) {
        const auto a = oracle::random_pba(rng, 3);
        const auto b = oracle::random_pba(rng, 3);
        const auto x = intersection(a, b);
        CHECK(validate_automaton(x).ok());
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(probable(x, w) == (probable(a, w) && probable(b, w)));
        }
    }
}

TEST_CASE("complement XOR law on random automata", "[property]")
{
    oracle::Rng rng(83);
    for (int i = 0; i < 40; ++i) {
        const auto p = oracle::random_pba(rng, 3);
        const auto c = complement(p);
        for (int j = 0; j < 10; ++j) {
            const auto w = oracle::random_lasso(rng, 2);
            CHECK(probable(p, w) != probable(c, w));
        }
    }
}

TEST_CASE("reports match the constructed automata")
{
    const auto p = gallery::fig1_left();
    TransformReport r;
    const auto c = complement(p, &r);
    CHECK(r.construction == "complement");
    CHECK(r.input_states == 2);
    CHECK(r.output_states == c.num_states());
    CHECK(r.output_pairs == 0);
    CHECK_FALSE(r.notes.empty());

    TransformReport l;
    const auto n = nba_to_pba(gallery::ln_nba(2), &l);
    CHECK(l.output_states == n.num_states());
}
