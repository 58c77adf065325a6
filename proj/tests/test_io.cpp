#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pomega/gallery.hpp"
#include "pomega/io.hpp"
#include "pomega/transform.hpp"

using namespace pomega;

namespace {

std::vector<io::Diagnostic> failure_of(const std::string& text, bool* validation = nullptr)
{
    try {
        io::parse_automaton(text);
    } catch (const io::ParseFailure& e) {
        if (validation)
            *validation = e.validation();
        return e.diagnostics();
    }
    return {};
}

bool mentions(const std::vector<io::Diagnostic>& ds, const std::string& text)
{
    return std::any_of(ds.begin(), ds.end(),
                       [&](const io::Diagnostic& d) { return d.message.find(text) != std::string::npos; });
}

std::vector<io::Model> gallery_models()
{
    std::vector<io::Model> out;
    out.emplace_back(gallery::fig1_left());
    out.emplace_back(gallery::fig1_right());
    out.emplace_back(gallery::p_lambda(Rational(2, 7)));
    out.emplace_back(gallery::lprime_pba(3));
    out.emplace_back(gallery::ln_nba(2));
    return out;
}

} // namespace

TEST_CASE("canonical serialization of fig1-left")
{
    const auto text = io::serialize(gallery::fig1_left());
    CHECK(text == "type pba\n"
                  "alphabet a b\n"
                  "state q0 init=1\n"
                  "state q1\n"
                  "edge q0 a q0 1/2\n"
                  "edge q0 a q1 1/2\n"
                  "edge q0 b q0 1\n"
                  "edge q1 a q1 1\n"
                  "acc buchi q1\n");
    std::size_t count = 0;
    for (std::size_t at = text.find("acc buchi q1"); at != std::string::npos; at = text.find("acc buchi q1", at + 1))
        ++count;
    CHECK(count == 1);
}

TEST_CASE("gallery automata round-trip")
{
    for (const auto& model : gallery_models()) {
        const auto text = io::serialize(model);
        const auto parsed = io::parse_automaton(text);
        CHECK(parsed.model == model);
        CHECK(io::serialize(parsed.model) == text);
    }
}

TEST_CASE("constructed automata round-trip", "[property]")
{
    oracle::Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const auto p = oracle::random_pba(rng, 3);
        for (const io::Model& m : {io::Model(p), io::Model(pba_to_zero_one_pra(p)),
                                   io::Model(product_streett(p, p)), io::Model(limit_determinize(support_automaton(p))),
                                   io::Model(oracle::random_mdp(rng, 4, 3))}) {
            const auto text = io::serialize(m);
            const auto parsed = io::parse_automaton(text);
            CHECK(parsed.model == m);
            CHECK(io::serialize(parsed.model) == text);
        }
    }
}

TEST_CASE("state order is preserved")
{
    const auto parsed = io::parse_automaton("type nba\nalphabet x\nstate z init\nstate a\nstate m\nedge a x z\n");
    const auto& n = std::get<NondeterministicAutomaton>(parsed.model);
    CHECK(n.states == std::vector<std::string>{"z", "a", "m"});
    CHECK(n.initial == StateSet{0});
    CHECK(n.successors(1, 0) == StateSet{0});
    CHECK(std::get<Buchi>(n.acceptance).final_states.empty());
}

TEST_CASE("comments, blank lines and pairs")
{
    const std::string text = "# a Rabin automaton\n"
                             "type pra\n"
                             "\n"
                             "alphabet a b   # two letters\n"
                             "state p init=1/3\n"
                             "state q init=2/3\n"
                             "edge p a q 1\n"
                             "edge q a p 1\n"
                             "acc pair H: p / K: q\n"
                             "acc pair H: / K: p q\n";
    const auto parsed = io::parse_automaton(text);
    CHECK(parsed.type == io::FileType::pra);
    const auto& p = std::get<ProbabilisticAutomaton>(parsed.model);
    REQUIRE(std::holds_alternative<Rabin>(p.acceptance));
    const auto& pairs = std::get<Rabin>(p.acceptance).pairs;
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].h == StateSet{0});
    CHECK(pairs[0].k == StateSet{1});
    CHECK(pairs[1].h.empty());
    CHECK(pairs[1].k == StateSet{0, 1});
    CHECK(p.initial[1] == Rational(2, 3));
}

TEST_CASE("POMDP files")
{
    const std::string text = "type pomdp\n"
                             "alphabet go\n"
                             "state s init=1 obs=dark\n"
                             "state t obs=dark\n"
                             "state u obs=light\n"
                             "edge s go t 1\n"
                             "edge t go u 1\n"
                             "edge u go u 1\n";
    const auto parsed = io::parse_automaton(text);
    const auto& m = std::get<Pomdp>(parsed.model);
    CHECK(m.num_observations() == 2);
    CHECK(m.observation == std::vector<std::size_t>{0, 0, 1});
    CHECK(io::serialize(m) == text);

    const auto mdp = io::parse_automaton("type mdp\nalphabet go\nstate s init=1\nedge s go s 1\n");
    CHECK(is_fully_observable(std::get<Pomdp>(mdp.model)));
    CHECK(io::serialize(mdp.model) == "type mdp\nalphabet go\nstate s init=1\nedge s go s 1\n");
}

TEST_CASE("syntax errors carry positions")
{
    bool validation = true;
    auto d = failure_of("type pba\nalphabet a\nstate q init=1\nedge q a q 0.5\n", &validation);
    REQUIRE_FALSE(d.empty());
    CHECK_FALSE(validation);
    CHECK(d[0].line == 4);
    CHECK(d[0].column == 12);
    CHECK(d[0].message.find("rational") != std::string::npos);

    d = failure_of("type xyz\nalphabet a\n");
    CHECK(mentions(d, "unknown automaton type"));
    CHECK(d[0].line == 1);

    d = failure_of("alphabet a\n");
    CHECK(mentions(d, "type"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nedge q a r 1\n");
    CHECK(mentions(d, "unknown state 'r'"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nedge q z q 1\n");
    CHECK(mentions(d, "not in the alphabet"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nedge q a q\n");
    CHECK(mentions(d, "probability"));

    d = failure_of("type nba\nalphabet a\nstate q init\nedge q a q 1\n");
    CHECK(mentions(d, "no edge probabilities"));

    d = failure_of("type pba\nalphabet a\nstate q init=1 obs=x\nedge q a q 1\n");
    CHECK(mentions(d, "only allowed for pomdp"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nstate q\n");
    CHECK(mentions(d, "duplicate state"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nedge q a q 1/2\nedge q a q 1/2\n");
    CHECK(mentions(d, "duplicate edge"));

    d = failure_of("type pra\nalphabet a\nstate q init=1\nedge q a q 1\nacc pair q / K: q\n");
    CHECK(mentions(d, "H:"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nedge q a q 1\nacc pair H: / K: q\n");
    CHECK(mentions(d, "needs type pra"));

    d = failure_of("type mdp\nalphabet a\nstate q init=1\nedge q a q 1\nacc buchi q\n");
    CHECK(mentions(d, "no 'acc' lines"));

    d = failure_of("type pba\nalphabet a\nstate q init=1\nbogus line\n");
    CHECK(mentions(d, "expected one of"));
    CHECK(d[0].line == 4);
    CHECK(d[0].column == 1);
}

TEST_CASE("validation errors name the offending row")
{
    bool validation = false;
    const auto d = failure_of("type pba\nalphabet a\nstate q0 init=1\nedge q0 a q0 1/2\n", &validation);
    CHECK(validation);
    CHECK(mentions(d, "row (q0,a) sums to 1/2"));

    const auto init = failure_of("type pba\nalphabet a\nstate q0 init=3/4\nedge q0 a q0 1\n", &validation);
    CHECK(validation);
    CHECK(mentions(init, "initial distribution sums to 3/4"));
}

TEST_CASE("lasso syntax")
{
    const Alphabet ab({"a", "b"});
    CHECK(io::parse_lasso("ab|a", ab) == io::parse_lasso("a b | a", ab));
    CHECK(io::parse_lasso("ab|a", ab) == LassoWord{{0, 1}, {0}});
    CHECK(io::parse_lasso("|b", ab) == LassoWord{{}, {1}});
    CHECK_THROWS_AS(io::parse_lasso("ab|", ab), Error);
    CHECK_THROWS_AS(io::parse_lasso("ab", ab), Error);
    CHECK_THROWS_AS(io::parse_lasso("a|b|a", ab), Error);
    CHECK_THROWS_AS(io::parse_lasso("ac|a", ab), Error);

    const Alphabet words({"go", "stop", "g"});
    CHECK(io::parse_lasso("go stop | go", words) == LassoWord{{0, 1}, {0}});
    CHECK(io::parse_lasso("|stop", words) == LassoWord{{}, {1}});
    CHECK(io::parse_lasso("gg|g", words) == LassoWord{{2, 2}, {2}});
    CHECK(io::format_lasso({{0, 1}, {0}}, words) == "go stop | go");
    CHECK(io::format_lasso({{}, {1}}, words) == "| stop");
    CHECK(io::format_lasso({{0, 1}, {0}}, ab) == "ab|a");
    CHECK(io::format_word({1, 1, 0}, ab) == "bba");
    CHECK(io::parse_word("abaab", ab) == Word{0, 1, 0, 0, 1});
    CHECK(io::parse_word("", ab).empty());

    oracle::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto w = oracle::random_lasso(rng, 3);
        CHECK(io::parse_lasso(io::format_lasso(w, words), words) == w);
        const auto v = oracle::random_lasso(rng, 2);
        CHECK(io::parse_lasso(io::format_lasso(v, ab), ab) == v);
    }
}
