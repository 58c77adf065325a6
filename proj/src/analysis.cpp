#include "pomega/analysis.hpp"

#include "graph.hpp"
#include "linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pomega {

namespace {

constexpr std::size_t none = static_cast<std::size_t>(-1);

/// Reachable part of the lasso chain. Edge probabilities point into the
/// automaton's rows; nullptr stands for probability 1 (a dead row feeding the
/// sink, or the sink's self loop).
struct Explored {
    std::vector<ChainNode> nodes;
    detail::Adjacency succ;
    std::vector<std::vector<const Rational*>> prob;
    std::vector<std::size_t> initial_nodes;
    std::vector<const Rational*> initial_prob;
};

Explored explore(const ProbabilisticAutomaton& automaton, const LassoWord& word)
{
    check_lasso(word, automaton.alphabet.size());
    const auto n = automaton.num_states();
    const auto length = word.schedule_length();

    Explored out;
    std::vector<std::size_t> index(n * length, none);
    out.nodes.push_back(ChainNode{none, none});
    out.succ.push_back({LassoChain::reject_node});
    out.prob.push_back({nullptr});

    auto intern = [&](StateId q, std::size_t pos) {
        auto& slot = index[pos * n + q];
        if (slot == none) {
            slot = out.nodes.size();
            out.nodes.push_back(ChainNode{q, pos});
            out.succ.emplace_back();
            out.prob.emplace_back();
        }
        return slot;
    };

    for (StateId q = 0; q < n; ++q)
        if (!is_zero(automaton.initial[q])) {
            out.initial_nodes.push_back(intern(q, 0));
            out.initial_prob.push_back(&automaton.initial[q]);
        }

    for (std::size_t v = 1; v < out.nodes.size(); ++v) {
        const auto [q, pos] = out.nodes[v];
        const auto& row = automaton.row(q, word.at(pos));
        const auto next = word.next(pos);
        if (row.empty()) {
            out.succ[v].push_back(LassoChain::reject_node);
            out.prob[v].push_back(nullptr);
            continue;
        }
        for (const auto& t : row) {
            const auto w = intern(t.target, next);
            out.succ[v].push_back(w);
            out.prob[v].push_back(&t.probability);
        }
    }
    return out;
}

const Rational& value_of(const Rational* p)
{
    static const Rational one(1);
    return p ? *p : one;
}

struct Classified {
    detail::SccResult scc;
    std::vector<char> bottom; ///< per component
};

Classified classify(const Explored& chain)
{
    Classified out;
    out.scc = detail::strongly_connected_components(chain.succ, chain.initial_nodes);
    out.bottom.resize(out.scc.components.size());
    for (std::size_t c = 0; c < out.scc.components.size(); ++c)
        out.bottom[c] = detail::is_bottom(chain.succ, out.scc, c);
    return out;
}

StateSet project(const Explored& chain, const std::vector<std::size_t>& members)
{
    std::vector<StateId> states;
    for (auto v : members)
        if (v != LassoChain::reject_node)
            states.push_back(chain.nodes[v].state);
    return make_state_set(std::move(states));
}

/// Absorption values: for every reachable node, the vector of values reached
/// in the bottom components (given by `bottom_value`, dimension `dim`).
template <typename BottomValue>
std::vector<std::vector<Rational>> absorb(const Explored& chain, const Classified& cls, std::size_t dim,
                                          BottomValue bottom_value)
{
    std::vector<std::vector<Rational>> value(chain.nodes.size());
    const auto& comps = cls.scc.components;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto& members = comps[c];
        if (cls.bottom[c]) {
            auto v = bottom_value(c);
            for (auto node : members)
                value[node] = v;
            continue;
        }
        const auto m = members.size();
        if (m == 1 && !detail::is_nontrivial(chain.succ, members)) {
            const auto node = members.front();
            std::vector<Rational> acc(dim, Rational(0));
            for (std::size_t e = 0; e < chain.succ[node].size(); ++e) {
                const auto& p = value_of(chain.prob[node][e]);
                const auto& target = value[chain.succ[node][e]];
                for (std::size_t d = 0; d < dim; ++d)
                    acc[d] += p * target[d];
            }
            value[node] = std::move(acc);
            continue;
        }
        // (I - P_SS) x = P_S,out * value_out
        std::vector<detail::SparseRow> a(m);
        detail::RationalMatrix b(m, std::vector<Rational>(dim, Rational(0)));
        for (std::size_t i = 0; i < m; ++i) {
            const auto node = members[i];
            a[i][i] += 1;
            for (std::size_t e = 0; e < chain.succ[node].size(); ++e) {
                const auto target = chain.succ[node][e];
                const auto& p = value_of(chain.prob[node][e]);
                if (cls.scc.component[target] == c) {
                    const auto j = static_cast<std::size_t>(
                        std::lower_bound(members.begin(), members.end(), target) - members.begin());
                    a[i][j] -= p;
                } else {
                    for (std::size_t d = 0; d < dim; ++d)
                        b[i][d] += p * value[target][d];
                }
            }
        }
        auto x = detail::solve_sparse(std::move(a), std::move(b));
        for (std::size_t i = 0; i < m; ++i)
            value[members[i]] = std::move(x[i]);
    }
    return value;
}

} // namespace

std::optional<std::size_t> LassoChain::find(StateId state, std::size_t position) const
{
    for (std::size_t v = 1; v < nodes.size(); ++v)
        if (nodes[v].state == state && nodes[v].position == position)
            return v;
    return std::nullopt;
}

LassoChain build_lasso_chain(const ProbabilisticAutomaton& automaton, const LassoWord& word)
{
    const auto explored = explore(automaton, word);
    LassoChain chain;
    chain.nodes = explored.nodes;
    chain.edges.resize(explored.nodes.size());
    for (std::size_t v = 0; v < explored.nodes.size(); ++v)
        for (std::size_t e = 0; e < explored.succ[v].size(); ++e)
            chain.edges[v].push_back(ChainEdge{explored.succ[v][e], value_of(explored.prob[v][e])});
    for (std::size_t i = 0; i < explored.initial_nodes.size(); ++i)
        chain.initial.emplace_back(explored.initial_nodes[i], *explored.initial_prob[i]);
    return chain;
}

BsccDecomposition bscc_decomposition(const LassoChain& chain)
{
    Explored view;
    view.nodes = chain.nodes;
    view.succ.resize(chain.size());
    view.prob.resize(chain.size());
    for (std::size_t v = 0; v < chain.size(); ++v)
        for (const auto& e : chain.edges[v]) {
            view.succ[v].push_back(e.target);
            view.prob[v].push_back(&e.probability);
        }
    for (const auto& [node, mass] : chain.initial) {
        view.initial_nodes.push_back(node);
        view.initial_prob.push_back(&mass);
    }

    const auto cls = classify(view);
    std::vector<std::size_t> bottoms;
    for (std::size_t c = 0; c < cls.scc.components.size(); ++c)
        if (cls.bottom[c])
            bottoms.push_back(c);

    auto sort_key = [&](std::size_t c) {
        const auto& members = cls.scc.components[c];
        if (members.front() == LassoChain::reject_node)
            return std::pair{none, none};
        std::pair best{none, none};
        for (auto v : members)
            best = std::min(best, std::pair{chain.nodes[v].state, chain.nodes[v].position});
        return best;
    };
    std::sort(bottoms.begin(), bottoms.end(), [&](auto l, auto r) { return sort_key(l) < sort_key(r); });

    std::vector<std::size_t> slot(cls.scc.components.size(), none);
    for (std::size_t i = 0; i < bottoms.size(); ++i)
        slot[bottoms[i]] = i;
    const auto values = absorb(view, cls, bottoms.size(), [&](std::size_t c) {
        std::vector<Rational> v(bottoms.size(), Rational(0));
        v[slot[c]] = 1;
        return v;
    });

    BsccDecomposition out;
    for (std::size_t i = 0; i < bottoms.size(); ++i) {
        Bscc b;
        b.nodes = cls.scc.components[bottoms[i]];
        b.is_reject = b.nodes.front() == LassoChain::reject_node;
        b.projected_states = project(view, b.nodes);
        b.reach_probability = 0;
        for (const auto& [node, mass] : chain.initial)
            b.reach_probability += mass * values[node][i];
        out.bsccs.push_back(std::move(b));
    }
    return out;
}

bool condition_satisfied(const AcceptanceCondition& acc, const StateSet& inf)
{
    if (const auto* buchi = std::get_if<Buchi>(&acc))
        return intersects(inf, buchi->final_states);
    if (const auto* rabin = std::get_if<Rabin>(&acc)) {
        for (const auto& pair : rabin->pairs)
            if (!intersects(inf, pair.h) && intersects(inf, pair.k))
                return true;
        return false;
    }
    for (const auto& pair : std::get<Streett>(acc).pairs)
        if (!intersects(inf, pair.h) && intersects(inf, pair.k))
            return false;
    return true;
}

BsccSummary bscc_summary(const ProbabilisticAutomaton& automaton, const LassoWord& word)
{
    const auto chain = explore(automaton, word);
    const auto cls = classify(chain);
    BsccSummary out;
    for (std::size_t c = 0; c < cls.scc.components.size(); ++c) {
        if (!cls.bottom[c])
            continue;
        if (cls.scc.components[c].front() == LassoChain::reject_node)
            out.reject_reachable = true;
        else
            out.bsccs.push_back(project(chain, cls.scc.components[c]));
    }
    return out;
}

QualitativeVerdict qualitative_acceptance(const ProbabilisticAutomaton& automaton, const LassoWord& word)
{
    const auto summary = bscc_summary(automaton, word);
    QualitativeVerdict out;
    out.almost_sure = !summary.reject_reachable;
    for (const auto& states : summary.bsccs) {
        if (condition_satisfied(automaton.acceptance, states))
            out.positive = true;
        else
            out.almost_sure = false;
    }
    return out;
}

Rational acceptance_probability(const ProbabilisticAutomaton& automaton, const LassoWord& word)
{
    const auto chain = explore(automaton, word);
    const auto cls = classify(chain);

    std::vector<char> accepting(cls.scc.components.size(), 0);
    bool any = false;
    bool all = true;
    for (std::size_t c = 0; c < cls.scc.components.size(); ++c) {
        if (!cls.bottom[c])
            continue;
        const auto& members = cls.scc.components[c];
        accepting[c] = members.front() != LassoChain::reject_node
                       && condition_satisfied(automaton.acceptance, project(chain, members));
        any = any || accepting[c];
        all = all && accepting[c];
    }
    if (!any)
        return 0;
    if (all)
        return 1;

    const auto values = absorb(chain, cls, 1, [&](std::size_t c) {
        return std::vector<Rational>{Rational(accepting[c] ? 1 : 0)};
    });
    Rational total = 0;
    for (std::size_t i = 0; i < chain.initial_nodes.size(); ++i)
        total += *chain.initial_prob[i] * values[chain.initial_nodes[i]][0];
    return total;
}

Rational prefix_consumption_probability(const ProbabilisticAutomaton& automaton, const Word& prefix)
{
    for (Symbol s : prefix)
        if (s >= automaton.alphabet.size())
            throw Error("prefix symbol " + std::to_string(s) + " is outside the alphabet");
    std::vector<Rational> mass = automaton.initial;
    for (Symbol s : prefix) {
        std::vector<Rational> next(automaton.num_states(), Rational(0));
        for (StateId q = 0; q < automaton.num_states(); ++q) {
            if (is_zero(mass[q]))
                continue;
            for (const auto& t : automaton.row(q, s))
                next[t.target] += mass[q] * t.probability;
        }
        mass = std::move(next);
    }
    Rational total = 0;
    for (const auto& m : mass)
        total += m;
    return total;
}

bool member(const ProbabilisticAutomaton& automaton, const LassoWord& word, const Semantics& semantics)
{
    switch (semantics.kind) {
    case SemanticsKind::probable:
        return qualitative_acceptance(automaton, word).positive;
    case SemanticsKind::almost_sure:
        return qualitative_acceptance(automaton, word).almost_sure;
    case SemanticsKind::threshold:
        if (sgn(semantics.lambda) < 0 || semantics.lambda >= 1)
            throw Error("threshold must satisfy 0 <= lambda < 1, got " + to_string(semantics.lambda));
        if (is_zero(semantics.lambda))
            return qualitative_acceptance(automaton, word).positive;
        return acceptance_probability(automaton, word) > semantics.lambda;
    }
    return false;
}

namespace {

struct NondetProduct {
    std::vector<ChainNode> nodes;
    detail::Adjacency succ;
    std::vector<std::size_t> roots;
};

NondetProduct nondet_product(const NondeterministicAutomaton& automaton, const LassoWord& word)
{
    check_lasso(word, automaton.alphabet.size());
    const auto n = automaton.num_states();
    NondetProduct out;
    std::vector<std::size_t> index(n * word.schedule_length(), none);
    auto intern = [&](StateId q, std::size_t pos) {
        auto& slot = index[pos * n + q];
        if (slot == none) {
            slot = out.nodes.size();
            out.nodes.push_back({q, pos});
            out.succ.emplace_back();
        }
        return slot;
    };
    for (StateId q : automaton.initial)
        out.roots.push_back(intern(q, 0));
    for (std::size_t v = 0; v < out.nodes.size(); ++v) {
        const auto [q, pos] = out.nodes[v];
        for (StateId target : automaton.successors(q, word.at(pos))) {
            const auto w = intern(target, word.next(pos));
            out.succ[v].push_back(w);
        }
    }
    return out;
}

bool streett_witness(const NondetProduct& g, const std::vector<AcceptancePair>& pairs,
                     const std::vector<std::size_t>& members)
{
    if (!detail::is_nontrivial(g.succ, members))
        return false;
    std::vector<StateId> projected;
    for (auto v : members)
        projected.push_back(g.nodes[v].state);
    const auto inf = make_state_set(std::move(projected));

    std::vector<char> drop(g.nodes.size(), 0);
    bool violated = false;
    for (const auto& pair : pairs)
        if (!intersects(inf, pair.h) && intersects(inf, pair.k)) {
            violated = true;
            for (auto v : members)
                if (contains(pair.k, g.nodes[v].state))
                    drop[v] = 1;
        }
    if (!violated)
        return true;

    std::vector<char> allowed(g.nodes.size(), 0);
    std::vector<std::size_t> remaining;
    for (auto v : members)
        if (!drop[v]) {
            allowed[v] = 1;
            remaining.push_back(v);
        }
    if (remaining.empty())
        return false;
    const auto sub = detail::strongly_connected_components(g.succ, remaining, allowed);
    for (const auto& comp : sub.components) {
        // self loops must stay inside the allowed set, which they do by construction
        if (streett_witness(g, pairs, comp))
            return true;
    }
    return false;
}

} // namespace

bool nondet_lasso_member(const NondeterministicAutomaton& automaton, const LassoWord& word)
{
    const auto g = nondet_product(automaton, word);
    if (g.roots.empty())
        return false;
    const auto scc = detail::strongly_connected_components(g.succ, g.roots);

    for (const auto& members : scc.components) {
        if (!detail::is_nontrivial(g.succ, members))
            continue;
        if (const auto* buchi = std::get_if<Buchi>(&automaton.acceptance)) {
            for (auto v : members)
                if (contains(buchi->final_states, g.nodes[v].state))
                    return true;
        } else if (const auto* rabin = std::get_if<Rabin>(&automaton.acceptance)) {
            for (const auto& pair : rabin->pairs) {
                std::vector<char> allowed(g.nodes.size(), 0);
                std::vector<std::size_t> kept;
                for (auto v : members)
                    if (!contains(pair.h, g.nodes[v].state)) {
                        allowed[v] = 1;
                        kept.push_back(v);
                    }
                const auto sub = detail::strongly_connected_components(g.succ, kept, allowed);
                for (const auto& comp : sub.components) {
                    if (!detail::is_nontrivial(g.succ, comp))
                        continue;
                    for (auto v : comp)
                        if (contains(pair.k, g.nodes[v].state))
                            return true;
                }
            }
        } else if (streett_witness(g, std::get<Streett>(automaton.acceptance).pairs, members)) {
            return true;
        }
    }
    return false;
}

double hoeffding_half_width(std::uint64_t samples, double confidence)
{
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

MonteCarloEstimate monte_carlo_estimate(const ProbabilisticAutomaton& automaton, const LassoWord& word,
                                        std::uint64_t samples, std::uint64_t seed)
{
    if (samples == 0)
        throw Error("monte carlo needs at least one sample");
    const auto chain = explore(automaton, word);
    const auto cls = classify(chain);

    // -1 transient, 0 rejecting bottom, 1 accepting bottom
    std::vector<int> verdict(chain.nodes.size(), -1);
    for (std::size_t c = 0; c < cls.scc.components.size(); ++c) {
        if (!cls.bottom[c])
            continue;
        const auto& members = cls.scc.components[c];
        const bool ok = members.front() != LassoChain::reject_node
                        && condition_satisfied(automaton.acceptance, project(chain, members));
        for (auto v : members)
            verdict[v] = ok ? 1 : 0;
    }

    auto cumulative = [](const std::vector<const Rational*>& probs) {
        std::vector<double> out;
        double acc = 0;
        for (const auto* p : probs) {
            acc += value_of(p).get_d();
            out.push_back(acc);
        }
        return out;
    };
    std::vector<std::vector<double>> cdf(chain.nodes.size());
    for (std::size_t v = 0; v < chain.nodes.size(); ++v)
        if (verdict[v] < 0 && !chain.succ[v].empty())
            cdf[v] = cumulative(chain.prob[v]);
    const auto initial_cdf = cumulative(chain.initial_prob);

    std::mt19937_64 rng(seed);
    auto pick = [&rng](const std::vector<double>& c) {
        std::uniform_real_distribution<double> u(0.0, c.back());
        const auto r = u(rng);
        const auto it = std::upper_bound(c.begin(), c.end(), r);
        return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - c.begin(), c.size() - 1));
    };

    MonteCarloEstimate out;
    out.samples = samples;
    for (std::uint64_t s = 0; s < samples; ++s) {
        auto node = chain.initial_nodes[pick(initial_cdf)];
        while (verdict[node] < 0)
            node = chain.succ[node][pick(cdf[node])];
        out.accepted += static_cast<std::uint64_t>(verdict[node]);
    }
    out.estimate = static_cast<double>(out.accepted) / static_cast<double>(samples);
    out.half_width = hoeffding_half_width(samples);
    return out;
}

} // namespace pomega
