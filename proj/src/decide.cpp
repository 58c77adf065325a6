#include "pomega/decide.hpp"

#include "pomega/analysis.hpp"

#include "graph.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace pomega {

StateSet Pomdp::initial_support() const
{
    StateSet out;
    for (StateId q = 0; q < initial.size(); ++q)
        if (!is_zero(initial[q]))
            out.push_back(q);
    return out;
}

StateSet Pomdp::observation_class(std::size_t obs) const
{
    StateSet out;
    for (StateId q = 0; q < num_states(); ++q)
        if (observation[q] == obs)
            out.push_back(q);
    return out;
}

ValidationReport validate_pomdp(const Pomdp& pomdp)
{
    auto as_automaton = make_probabilistic(pomdp.actions, pomdp.states);
    as_automaton.delta = pomdp.delta;
    as_automaton.initial = pomdp.initial;
    auto report = validate_automaton(as_automaton);
    if (pomdp.observation.size() != pomdp.num_states())
        report.violations.push_back("observation map has " + std::to_string(pomdp.observation.size())
                                    + " entries for " + std::to_string(pomdp.num_states()) + " states");
    else
        for (StateId q = 0; q < pomdp.num_states(); ++q)
            if (pomdp.observation[q] >= pomdp.num_observations())
                report.violations.push_back("state " + pomdp.states[q] + " has an undeclared observation class");
    return report;
}

bool is_fully_observable(const Pomdp& pomdp)
{
    std::vector<std::size_t> count(pomdp.num_observations(), 0);
    for (auto obs : pomdp.observation)
        if (++count[obs] > 1)
            return false;
    return true;
}

std::pair<Pomdp, StateSet> pba_as_pomdp(const ProbabilisticAutomaton& pba)
{
    Pomdp out;
    out.states = pba.states;
    out.actions = pba.alphabet;
    out.delta = pba.delta;
    out.initial = pba.initial;
    out.observation.assign(pba.num_states(), 0);
    out.observation_names = {"all"};
    return {std::move(out), final_states(pba.acceptance)};
}

Pomdp make_mdp(std::vector<std::string> states, Alphabet actions, std::vector<std::vector<Distribution>> delta,
               std::vector<Rational> initial)
{
    Pomdp out;
    out.observation_names = states;
    out.states = std::move(states);
    out.actions = std::move(actions);
    out.delta = std::move(delta);
    out.initial = std::move(initial);
    for (StateId q = 0; q < out.num_states(); ++q)
        out.observation.push_back(q);
    return out;
}

std::string describe(const Objective& objective)
{
    std::string out = objective.mode == ObjectiveMode::almost_sure ? "almost-sure " : "positive ";
    return out + (objective.kind == ObjectiveKind::recurrence ? "recurrence (GF target)" : "persistence (FG target)");
}

std::string to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "unknown";
    }
}

StrategyCertificate StrategyCertificate::from_word(const LassoWord& word, std::size_t num_observations)
{
    StrategyCertificate out;
    out.memory_count = word.schedule_length();
    out.initial.assign(num_observations, 0);
    for (std::size_t m = 0; m < out.memory_count; ++m) {
        out.update.emplace_back(num_observations, word.next(m));
        out.choice.emplace_back(num_observations, word.at(m));
    }
    out.word = word;
    return out;
}

namespace {

constexpr std::size_t none = static_cast<std::size_t>(-1);

void check_objective(const Objective& objective, std::size_t num_states)
{
    for (StateId q : objective.target)
        if (q >= num_states)
            throw Error("objective target references missing state " + std::to_string(q));
}

void check_shape(const Pomdp& pomdp, const StrategyCertificate& cert)
{
    const auto obs = pomdp.num_observations();
    auto fail = [](const std::string& what) { throw Error("malformed strategy certificate: " + what); };
    if (cert.memory_count == 0)
        fail("no memory states");
    if (cert.initial.size() != obs)
        fail("initial memory needs one entry per observation");
    if (cert.update.size() != cert.memory_count || cert.choice.size() != cert.memory_count)
        fail("update and choice need one row per memory state");
    for (std::size_t m = 0; m < cert.memory_count; ++m) {
        if (cert.update[m].size() != obs || cert.choice[m].size() != obs)
            fail("rows need one entry per observation");
        for (std::size_t o = 0; o < obs; ++o) {
            if (cert.update[m][o] >= cert.memory_count)
                fail("memory update out of range");
            if (cert.choice[m][o] != StrategyCertificate::no_action && cert.choice[m][o] >= pomdp.actions.size())
                fail("action out of range");
        }
    }
    for (auto m : cert.initial)
        if (m >= cert.memory_count)
            fail("initial memory out of range");
}

} // namespace

CertificateCheck validate_certificate(const Pomdp& pomdp, const StrategyCertificate& cert, const Objective& objective)
{
    check_objective(objective, pomdp.num_states());
    check_shape(pomdp, cert);
    const auto mem = cert.memory_count;

    // node 0 is the sink for runs that die
    std::vector<std::size_t> index(pomdp.num_states() * mem, none);
    std::vector<std::pair<StateId, std::size_t>> nodes{{none, none}};
    detail::Adjacency succ{{0}};
    auto intern = [&](StateId s, std::size_t m) {
        auto& slot = index[s * mem + m];
        if (slot == none) {
            slot = nodes.size();
            nodes.emplace_back(s, m);
            succ.emplace_back();
        }
        return slot;
    };

    std::vector<std::size_t> roots;
    for (StateId s : pomdp.initial_support())
        roots.push_back(intern(s, cert.initial[pomdp.observation[s]]));

    for (std::size_t v = 1; v < nodes.size(); ++v) {
        const auto [s, m] = nodes[v];
        const auto action = cert.choice[m][pomdp.observation[s]];
        if (action == StrategyCertificate::no_action) {
            succ[v].push_back(0);
            continue;
        }
        if (!pomdp.available(s, action)) {
            CertificateCheck out;
            out.unavailable_action = true;
            StateSet belief;
            for (std::size_t u = 1; u < nodes.size(); ++u)
                if (nodes[u].second == m)
                    belief.push_back(nodes[u].first);
            belief = make_state_set(std::move(belief));
            std::string names;
            for (StateId q : belief)
                names += (names.empty() ? "" : ",") + pomdp.states[q];
            out.message = "action " + pomdp.actions.symbol(action) + " is unavailable in state " + pomdp.states[s]
                          + " (memory " + std::to_string(m) + ", support {" + names + "})";
            return out;
        }
        for (const auto& t : pomdp.row(s, action)) {
            const auto next = intern(t.target, cert.update[m][pomdp.observation[t.target]]);
            succ[v].push_back(next);
        }
    }

    const auto scc = detail::strongly_connected_components(succ, roots);
    bool all_good = true;
    bool some_good = false;
    for (std::size_t c = 0; c < scc.components.size(); ++c) {
        if (!detail::is_bottom(succ, scc, c))
            continue;
        const auto& members = scc.components[c];
        bool good = false;
        if (members.front() != 0) {
            if (objective.kind == ObjectiveKind::recurrence) {
                good = std::any_of(members.begin(), members.end(),
                                   [&](auto v) { return contains(objective.target, nodes[v].first); });
            } else {
                good = std::all_of(members.begin(), members.end(),
                                   [&](auto v) { return contains(objective.target, nodes[v].first); });
            }
        }
        all_good = all_good && good;
        some_good = some_good || good;
    }

    CertificateCheck out;
    out.valid = objective.mode == ObjectiveMode::almost_sure ? all_good : some_good;
    out.message = std::string(out.valid ? "valid" : "invalid") + " for " + describe(objective) + " on a "
                  + std::to_string(nodes.size() - 1) + "-node product chain";
    return out;
}

namespace {

/// Actions per state that stay inside `keep` (all enabled actions when `keep`
/// is empty).
std::vector<std::vector<Symbol>> actions_within(const Pomdp& m, const std::vector<char>& keep)
{
    std::vector<std::vector<Symbol>> out(m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s) {
        if (!keep.empty() && !keep[s])
            continue;
        for (Symbol a = 0; a < m.actions.size(); ++a) {
            if (!m.available(s, a))
                continue;
            const auto& row = m.row(s, a);
            if (keep.empty() || std::all_of(row.begin(), row.end(), [&](const auto& t) { return keep[t.target]; }))
                out[s].push_back(a);
        }
    }
    return out;
}

struct EndComponents {
    std::vector<StateSet> components;
    std::vector<std::vector<Symbol>> actions; ///< internal actions per state
};

/// Maximal end components of the sub-MDP on `keep` (empty = everything).
EndComponents maximal_end_components(const Pomdp& m, const std::vector<char>& keep)
{
    const auto n = m.num_states();
    auto actions = actions_within(m, keep);
    std::vector<char> alive(n, 0);
    for (StateId s = 0; s < n; ++s)
        alive[s] = !actions[s].empty();

    detail::SccResult scc;
    bool changed = true;
    while (changed) {
        changed = false;
        detail::Adjacency graph(n);
        std::vector<std::size_t> roots;
        for (StateId s = 0; s < n; ++s) {
            if (!alive[s])
                continue;
            roots.push_back(s);
            for (Symbol a : actions[s])
                for (const auto& t : m.row(s, a))
                    graph[s].push_back(t.target);
        }
        scc = detail::strongly_connected_components(graph, roots, alive);
        for (StateId s = 0; s < n; ++s) {
            if (!alive[s])
                continue;
            auto& acts = actions[s];
            const auto before = acts.size();
            acts.erase(std::remove_if(acts.begin(), acts.end(),
                                      [&](Symbol a) {
                                          const auto& row = m.row(s, a);
                                          return std::any_of(row.begin(), row.end(), [&](const auto& t) {
                                              return !alive[t.target] || scc.component[t.target] != scc.component[s];
                                          });
                                      }),
                       acts.end());
            if (acts.size() != before)
                changed = true;
            if (acts.empty()) {
                alive[s] = 0;
                changed = true;
            }
        }
    }

    EndComponents out;
    out.actions = std::move(actions);
    for (const auto& members : scc.components) {
        if (!alive[members.front()])
            continue;
        out.components.push_back(members);
    }
    std::sort(out.components.begin(), out.components.end());
    return out;
}

/// Backward BFS layers towards `goal` using the given actions: returns per
/// state the chosen action (goal states get none) or none if unreachable.
std::vector<Symbol> attract(const Pomdp& m, const std::vector<std::vector<Symbol>>& actions,
                            const std::vector<char>& goal, std::vector<char>& reached)
{
    const auto n = m.num_states();
    std::vector<Symbol> choice(n, StrategyCertificate::no_action);
    reached = goal;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<StateId> layer;
        for (StateId s = 0; s < n; ++s) {
            if (reached[s])
                continue;
            for (Symbol a : actions[s]) {
                const auto& row = m.row(s, a);
                if (std::any_of(row.begin(), row.end(), [&](const auto& t) { return reached[t.target]; })) {
                    choice[s] = a;
                    layer.push_back(s);
                    break;
                }
            }
        }
        for (StateId s : layer)
            reached[s] = 1;
        grew = !layer.empty();
    }
    return choice;
}

StrategyCertificate memoryless(const Pomdp& m, const std::vector<Symbol>& action_per_state)
{
    StrategyCertificate out;
    out.memory_count = 1;
    out.initial.assign(m.num_observations(), 0);
    out.update.assign(1, std::vector<std::size_t>(m.num_observations(), 0));
    out.choice.assign(1, std::vector<Symbol>(m.num_observations(), StrategyCertificate::no_action));
    for (StateId s = 0; s < m.num_states(); ++s)
        out.choice[0][m.observation[s]] = action_per_state[s];
    return out;
}

} // namespace

DecisionOutcome mdp_decide(const Pomdp& mdp, const Objective& objective)
{
    if (!is_fully_observable(mdp))
        throw Error("mdp_decide needs a fully observable MDP (singleton observation classes)");
    check_objective(objective, mdp.num_states());
    const auto n = mdp.num_states();

    // Target end components and the strategy that keeps runs inside them.
    std::vector<char> in_target(n, 0);
    std::vector<Symbol> strategy(n, StrategyCertificate::no_action);
    if (objective.kind == ObjectiveKind::recurrence) {
        const auto ecs = maximal_end_components(mdp, {});
        for (const auto& comp : ecs.components) {
            if (!intersects(comp, objective.target))
                continue;
            std::vector<char> inside(n, 0), goal(n, 0), reached;
            for (StateId s : comp) {
                inside[s] = 1;
                in_target[s] = 1;
                goal[s] = contains(objective.target, s);
            }
            std::vector<std::vector<Symbol>> internal(n);
            for (StateId s : comp)
                internal[s] = ecs.actions[s];
            const auto toward = attract(mdp, internal, goal, reached);
            for (StateId s : comp)
                strategy[s] = goal[s] ? internal[s].front() : toward[s];
        }
    } else {
        std::vector<char> keep(n, 0);
        for (StateId s : objective.target)
            keep[s] = 1;
        const auto ecs = maximal_end_components(mdp, keep);
        for (const auto& comp : ecs.components)
            for (StateId s : comp) {
                in_target[s] = 1;
                strategy[s] = ecs.actions[s].front();
            }
    }

    const auto init = mdp.initial_support();
    DecisionOutcome out;
    bool yes = false;
    if (objective.mode == ObjectiveMode::positive) {
        std::vector<char> reached;
        const auto toward = attract(mdp, actions_within(mdp, {}), in_target, reached);
        yes = std::any_of(init.begin(), init.end(), [&](StateId s) { return reached[s]; });
        for (StateId s = 0; s < n; ++s)
            if (!in_target[s])
                strategy[s] = toward[s];
    } else {
        // Greatest fixed point: states that can reach the target while every
        // chosen action keeps them inside the candidate set.
        std::vector<char> win(n, 1), reached;
        std::vector<Symbol> toward;
        while (true) {
            auto actions = actions_within(mdp, win);
            toward = attract(mdp, actions, in_target, reached);
            std::vector<char> next(n, 0);
            for (StateId s = 0; s < n; ++s)
                next[s] = win[s] && reached[s];
            if (next == win)
                break;
            win = std::move(next);
        }
        yes = std::all_of(init.begin(), init.end(), [&](StateId s) { return win[s]; });
        for (StateId s = 0; s < n; ++s)
            if (!in_target[s])
                strategy[s] = win[s] ? toward[s] : StrategyCertificate::no_action;
    }
    for (StateId s = 0; s < n; ++s)
        if (strategy[s] == StrategyCertificate::no_action)
            for (Symbol a = 0; a < mdp.actions.size(); ++a)
                if (mdp.available(s, a)) {
                    strategy[s] = a;
                    break;
                }

    out.verdict = yes ? Verdict::yes : Verdict::no;
    out.diagnostics.push_back(describe(objective) + " decided by end-component analysis");
    if (yes) {
        out.certificate = memoryless(mdp, strategy);
        const auto check = validate_certificate(mdp, *out.certificate, objective);
        if (!check.valid)
            throw std::logic_error("mdp_decide produced an invalid certificate: " + check.message);
    }
    return out;
}

namespace {

std::size_t power_bound(std::size_t n, std::size_t cap)
{
    if (n >= 63)
        return cap;
    return std::min<std::size_t>(std::size_t{1} << n, cap);
}

StateSet post(const ProbabilisticAutomaton& pba, const StateSet& from, Symbol a)
{
    std::vector<StateId> out;
    for (StateId q : from)
        for (const auto& t : pba.row(q, a))
            out.push_back(t.target);
    return make_state_set(std::move(out));
}

bool total(const ProbabilisticAutomaton& pba, const StateSet& from, Symbol a)
{
    return std::all_of(from.begin(), from.end(), [&](StateId q) { return !pba.row(q, a).empty(); });
}

struct SupportNode {
    StateSet support;
    Word stem;
};

/// Breadth-first exploration of the support graph. With `death_free`, an
/// edge R -a-> R' exists only when every state of R can read a.
std::vector<SupportNode> explore_supports(const ProbabilisticAutomaton& pba, std::size_t stem_bound,
                                          bool death_free, bool& truncated)
{
    truncated = false;
    std::vector<SupportNode> out;
    std::map<StateSet, std::size_t> seen;
    const auto init = pba.initial_support();
    out.push_back({init, {}});
    seen.emplace(init, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (Symbol a = 0; a < pba.alphabet.size(); ++a) {
            if (death_free && !total(pba, out[i].support, a))
                continue;
            auto next = post(pba, out[i].support, a);
            if (next.empty() || seen.count(next))
                continue;
            if (out[i].stem.size() >= stem_bound) {
                truncated = true;
                continue;
            }
            auto stem = out[i].stem;
            stem.push_back(a);
            seen.emplace(next, out.size());
            out.push_back({std::move(next), std::move(stem)});
        }
    }
    return out;
}

LassoWord normalize(LassoWord word)
{
    while (!word.stem.empty() && word.stem.back() == word.loop.back()) {
        word.stem.pop_back();
        std::rotate(word.loop.rbegin(), word.loop.rbegin() + 1, word.loop.rend());
    }
    return word;
}

/// Calls `visit` on every word of length 1..bound in length-lexicographic
/// order until it returns true.
template <typename Visit>
bool for_each_word(std::size_t alphabet, std::size_t bound, Visit visit)
{
    for (std::size_t len = 1; len <= bound; ++len) {
        Word w(len, 0);
        while (true) {
            if (visit(w))
                return true;
            std::size_t i = len;
            while (i > 0 && ++w[i - 1] == alphabet)
                w[--i] = 0;
            if (i == 0)
                break;
        }
    }
    return false;
}

std::string render(const ProbabilisticAutomaton& pba, const LassoWord& w)
{
    std::string out;
    for (Symbol s : w.stem)
        out += pba.alphabet.symbol(s) + " ";
    out += "|";
    for (Symbol s : w.loop)
        out += " " + pba.alphabet.symbol(s);
    return out;
}

} // namespace

DecisionOutcome as_empty(const ProbabilisticAutomaton& pba, SearchBounds bounds)
{
    if (!is_buchi(pba.acceptance))
        throw Error("as_empty needs a Büchi automaton");
    const auto n = pba.num_states();
    const auto stem_bound = bounds.stem ? bounds.stem : power_bound(n, std::numeric_limits<std::size_t>::max());
    const auto loop_bound = bounds.loop ? bounds.loop : power_bound(n, std::numeric_limits<std::size_t>::max());

    DecisionOutcome out;
    out.diagnostics.push_back("bounds: stem <= " + std::to_string(stem_bound) + ", simple support cycles of length <= "
                              + std::to_string(loop_bound));
    if (final_states(pba.acceptance).empty()) {
        out.verdict = Verdict::no;
        out.diagnostics.push_back("Büchi set is empty, so no run is accepting");
        return out;
    }

    bool truncated = false;
    const auto nodes = explore_supports(pba, stem_bound, true, truncated);
    bool full_graph = true;
    std::size_t reachable_supports = nodes.size();
    if (truncated) {
        bool ignored = false;
        reachable_supports = explore_supports(pba, std::numeric_limits<std::size_t>::max(), true, ignored).size();
        full_graph = false;
    }
    const bool loops_exhaustive = loop_bound >= reachable_supports;

    for (const auto& node : nodes) {
        const auto& root = node.support;
        for (std::size_t len = 1; len <= std::min(loop_bound, reachable_supports); ++len) {
            std::vector<StateSet> path{root};
            Word word;
            std::optional<LassoWord> found;
            auto dfs = [&](auto&& self) -> bool {
                if (word.size() == len) {
                    if (path.back() != root)
                        return false;
                    LassoWord lasso{node.stem, word};
                    if (qualitative_acceptance(pba, lasso).almost_sure) {
                        found = lasso;
                        return true;
                    }
                    return false;
                }
                if (!word.empty() && path.back() == root)
                    return false;
                if (std::find(path.begin(), path.end() - 1, path.back()) != path.end() - 1)
                    return false;
                for (Symbol a = 0; a < pba.alphabet.size(); ++a) {
                    if (!total(pba, path.back(), a))
                        continue;
                    auto next = post(pba, path.back(), a);
                    if (next.empty())
                        continue;
                    path.push_back(std::move(next));
                    word.push_back(a);
                    const bool hit = self(self);
                    path.pop_back();
                    word.pop_back();
                    if (hit)
                        return true;
                }
                return false;
            };
            if (dfs(dfs)) {
                out.verdict = Verdict::yes;
                out.witness = normalize(*found);
                out.certificate = StrategyCertificate::from_word(*out.witness, 1);
                out.diagnostics.push_back("witness " + render(pba, *out.witness) + " is accepted with probability 1");
                return out;
            }
        }
    }

    out.verdict = full_graph && loops_exhaustive ? Verdict::no : Verdict::unknown;
    out.diagnostics.push_back(std::to_string(reachable_supports) + " death-free reachable supports; "
                              + (out.verdict == Verdict::no ? "search exhausted"
                                                            : "search cut by the bounds"));
    out.diagnostics.push_back("witnesses are lassos whose loop is a simple cycle of the support graph");
    return out;
}

UniversalityOutcome as_universal(const ProbabilisticAutomaton& pba, SearchBounds bounds)
{
    if (!is_buchi(pba.acceptance))
        throw Error("as_universal needs a Büchi automaton");
    const auto n = pba.num_states();
    UniversalityOutcome out;
    out.bounds.stem = bounds.stem ? bounds.stem : power_bound(n, std::numeric_limits<std::size_t>::max());
    out.bounds.loop = bounds.loop ? bounds.loop : power_bound(n, 8);

    bool truncated = false;
    const auto nodes = explore_supports(pba, out.bounds.stem, true, truncated);
    auto refute = [&](LassoWord w) {
        out.refuted = true;
        out.witness = normalize(std::move(w));
        out.witness_probability = acceptance_probability(pba, *out.witness);
        out.diagnostics.push_back("refuted by " + render(pba, *out.witness) + " with probability "
                                  + to_string(out.witness_probability));
        return out;
    };

    for (const auto& node : nodes) {
        for (Symbol a = 0; a < pba.alphabet.size(); ++a)
            if (!total(pba, node.support, a))
                return refute(LassoWord{node.stem, {a}});
        std::optional<LassoWord> found;
        for_each_word(pba.alphabet.size(), out.bounds.loop, [&](const Word& y) {
            LassoWord w{node.stem, y};
            if (qualitative_acceptance(pba, w).almost_sure)
                return false;
            found = w;
            return true;
        });
        if (found)
            return refute(*found);
    }
    out.diagnostics.push_back("no refutation with stem <= " + std::to_string(out.bounds.stem) + " and loop length <= "
                              + std::to_string(out.bounds.loop) + (truncated ? " (support graph cut by the stem bound)" : "")
                              + "; universality is not claimed beyond these bounds");
    return out;
}

DecisionOutcome positive_empty_bounded(const ProbabilisticAutomaton& pba, SearchBounds bounds)
{
    if (!is_buchi(pba.acceptance))
        throw Error("positive_empty_bounded needs a Büchi automaton");
    const auto n = pba.num_states();
    const auto stem_bound = bounds.stem ? bounds.stem : power_bound(n, std::numeric_limits<std::size_t>::max());
    const auto loop_bound = bounds.loop ? bounds.loop : power_bound(n, 8);

    DecisionOutcome out;
    out.verdict = Verdict::unknown;
    if (final_states(pba.acceptance).empty()) {
        out.diagnostics.push_back("Büchi set is empty, which forces emptiness; the bounded search does not claim it");
        return out;
    }
    bool truncated = false;
    const auto nodes = explore_supports(pba, stem_bound, false, truncated);
    for (const auto& node : nodes) {
        std::optional<LassoWord> found;
        for_each_word(pba.alphabet.size(), loop_bound, [&](const Word& y) {
            LassoWord w{node.stem, y};
            if (!qualitative_acceptance(pba, w).positive)
                return false;
            found = w;
            return true;
        });
        if (found) {
            out.verdict = Verdict::yes;
            out.witness = normalize(*found);
            out.diagnostics.push_back("witness " + render(pba, *out.witness) + " is accepted with probability "
                                      + to_string(acceptance_probability(pba, *out.witness)));
            return out;
        }
    }
    out.diagnostics.push_back("no accepted lasso with stem <= " + std::to_string(stem_bound) + " and loop length <= "
                              + std::to_string(loop_bound) + "; emptiness is undecidable and is not claimed");
    return out;
}

namespace {

class BeliefSearch {
public:
    BeliefSearch(const Pomdp& m, const Objective& objective, std::size_t bound)
        : m_(m), objective_(objective), bound_(bound)
    {
        for (std::size_t o = 0; o < m.num_observations(); ++o)
            classes_.push_back(m.observation_class(o));
    }

    std::optional<StrategyCertificate> run()
    {
        const auto init = m_.initial_support();
        initial_.assign(m_.num_observations(), none);
        for (std::size_t o = 0; o < classes_.size(); ++o) {
            auto b = restrict(init, o);
            if (!b.empty())
                initial_[o] = intern(std::move(b));
        }
        assign(0);
        return found_;
    }

    std::size_t candidates() const { return candidates_; }
    bool exhausted() const { return !cut_; }
    bool pruned_partial() const { return pruned_partial_; }

private:
    StateSet restrict(const StateSet& set, std::size_t obs) const
    {
        StateSet out;
        for (StateId q : set)
            if (m_.observation[q] == obs)
                out.push_back(q);
        return out;
    }

    StateSet image(const StateSet& from, Symbol a) const
    {
        std::vector<StateId> out;
        for (StateId q : from)
            for (const auto& t : m_.row(q, a))
                out.push_back(t.target);
        return make_state_set(std::move(out));
    }

    std::size_t intern(StateSet b)
    {
        auto [it, fresh] = index_.try_emplace(b, beliefs_.size());
        if (fresh) {
            beliefs_.push_back(std::move(b));
            action_.push_back(StrategyCertificate::no_action);
        }
        return it->second;
    }

    void forget_after(std::size_t size)
    {
        while (beliefs_.size() > size) {
            index_.erase(beliefs_.back());
            beliefs_.pop_back();
            action_.pop_back();
        }
    }

    void assign(std::size_t i)
    {
        if (found_ || cut_)
            return;
        if (i == beliefs_.size()) {
            validate();
            return;
        }
        std::vector<Symbol> enabled;
        for (Symbol a = 0; a < m_.actions.size(); ++a) {
            const auto& b = beliefs_[i];
            const auto available = std::count_if(b.begin(), b.end(), [&](StateId q) { return m_.available(q, a); });
            if (available == static_cast<std::ptrdiff_t>(b.size()))
                enabled.push_back(a);
            else if (available > 0)
                pruned_partial_ = true;
        }
        if (enabled.empty()) {
            action_[i] = StrategyCertificate::no_action;
            assign(i + 1);
            return;
        }
        for (Symbol a : enabled) {
            const auto size = beliefs_.size();
            action_[i] = a;
            const auto next = image(beliefs_[i], a);
            for (std::size_t o = 0; o < classes_.size(); ++o) {
                auto b = restrict(next, o);
                if (!b.empty())
                    intern(std::move(b));
            }
            assign(i + 1);
            forget_after(size);
            if (found_ || cut_)
                return;
        }
    }

    void validate()
    {
        if (candidates_ >= bound_) {
            cut_ = true;
            return;
        }
        ++candidates_;
        const auto obs = m_.num_observations();
        StrategyCertificate cert;
        cert.memory_count = beliefs_.size();
        cert.initial.resize(obs);
        for (std::size_t o = 0; o < obs; ++o)
            cert.initial[o] = initial_[o] == none ? 0 : initial_[o];
        for (std::size_t b = 0; b < beliefs_.size(); ++b) {
            cert.choice.emplace_back(obs, action_[b]);
            std::vector<std::size_t> row(obs, b);
            if (action_[b] != StrategyCertificate::no_action) {
                const auto next = image(beliefs_[b], action_[b]);
                for (std::size_t o = 0; o < obs; ++o) {
                    const auto it = index_.find(restrict(next, o));
                    if (it != index_.end())
                        row[o] = it->second;
                }
            }
            cert.update.push_back(std::move(row));
        }
        if (validate_certificate(m_, cert, objective_).valid)
            found_ = std::move(cert);
    }

    const Pomdp& m_;
    const Objective& objective_;
    std::size_t bound_;
    std::vector<StateSet> classes_;
    std::vector<StateSet> beliefs_;
    std::map<StateSet, std::size_t> index_;
    std::vector<Symbol> action_;
    std::vector<std::size_t> initial_;
    std::optional<StrategyCertificate> found_;
    std::size_t candidates_ = 0;
    bool cut_ = false;
    bool pruned_partial_ = false;
};

} // namespace

DecisionOutcome pomdp_decide(const Pomdp& pomdp, const Objective& objective, std::size_t bound)
{
    check_objective(objective, pomdp.num_states());
    const bool as_recurrence =
        objective.kind == ObjectiveKind::recurrence && objective.mode == ObjectiveMode::almost_sure;
    const bool pos_persistence =
        objective.kind == ObjectiveKind::persistence && objective.mode == ObjectiveMode::positive;
    if (!as_recurrence && !pos_persistence)
        throw Error(describe(objective)
                    + " is undecidable for POMDPs; for the probable-semantics question on automata use "
                      "positive_empty_bounded (cli: decide --question pos-empty)");
    if (bound == 0)
        bound = 100000;

    DecisionOutcome out;
    out.diagnostics.push_back("candidate strategies: memoryless choice over belief supports (assumed sufficient)");
    if (objective.target.empty()) {
        out.verdict = Verdict::no;
        out.diagnostics.push_back("target set is empty");
        return out;
    }

    BeliefSearch search(pomdp, objective, bound);
    auto cert = search.run();
    out.diagnostics.push_back(std::to_string(search.candidates()) + " candidate strategies validated");
    if (cert) {
        out.verdict = Verdict::yes;
        out.certificate = std::move(cert);
        return out;
    }
    if (!search.exhausted()) {
        out.verdict = Verdict::unknown;
        out.diagnostics.push_back("candidate bound " + std::to_string(bound) + " reached");
    } else if (pos_persistence && search.pruned_partial()) {
        out.verdict = Verdict::unknown;
        out.diagnostics.push_back(
            "candidates exhausted, but actions unavailable in part of a belief were excluded");
    } else {
        out.verdict = Verdict::no;
        out.diagnostics.push_back("belief-support candidate space exhausted");
    }
    return out;
}

} // namespace pomega
