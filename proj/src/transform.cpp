#include "pomega/transform.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pomega {

namespace {

void require_buchi(const AcceptanceCondition& acc, const char* op)
{
    if (!is_buchi(acc))
        throw Error(std::string(op) + " needs a Büchi automaton, got " + kind_name(acc));
}

void require_same_alphabet(const Alphabet& lhs, const Alphabet& rhs, const char* op)
{
    if (!(lhs == rhs))
        throw Error(std::string(op) + " needs automata over the same alphabet");
}

/// Appends ~k to repeated names so that generated state names stay unique.
void make_unique(std::vector<std::string>& names)
{
    std::set<std::string> seen;
    for (auto& name : names) {
        if (seen.insert(name).second)
            continue;
        for (std::size_t k = 1;; ++k) {
            auto candidate = name + "~" + std::to_string(k);
            if (seen.insert(candidate).second) {
                name = std::move(candidate);
                break;
            }
        }
    }
}

std::string set_name(const std::vector<std::string>& names, const StateSet& set)
{
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i)
            out += '+';
        out += names[set[i]];
    }
    return out + "}";
}

StateSet intersect(const StateSet& lhs, const StateSet& rhs)
{
    StateSet out;
    std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
    return out;
}

StateSet unite(const StateSet& lhs, const StateSet& rhs)
{
    StateSet out;
    std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
    return out;
}

template <typename Automaton>
std::size_t size_pairs(const Automaton& a)
{
    return pair_count(a.acceptance);
}

template <typename In, typename Out>
void fill(TransformReport* report, std::string construction, const In& in, const Out& out,
          std::vector<std::string> notes = {})
{
    if (!report)
        return;
    report->construction = std::move(construction);
    report->input_states = in.num_states();
    report->input_pairs = size_pairs(in);
    report->output_states = out.num_states();
    report->output_pairs = size_pairs(out);
    report->notes = std::move(notes);
}

template <typename Out>
void fill_binary(TransformReport* report, std::string construction, const ProbabilisticAutomaton& lhs,
                 const ProbabilisticAutomaton& rhs, const Out& out, std::vector<std::string> notes = {})
{
    if (!report)
        return;
    report->construction = std::move(construction);
    report->input_states = lhs.num_states() + rhs.num_states();
    report->input_pairs = size_pairs(lhs) + size_pairs(rhs);
    report->output_states = out.num_states();
    report->output_pairs = size_pairs(out);
    report->notes = std::move(notes);
}

ProbabilisticAutomaton build(const Alphabet& alphabet, std::vector<std::string> names)
{
    make_unique(names);
    return make_probabilistic(alphabet, std::move(names));
}

} // namespace

ProbabilisticAutomaton union_of(const ProbabilisticAutomaton& lhs, const ProbabilisticAutomaton& rhs,
                                TransformReport* report)
{
    require_buchi(lhs.acceptance, "union");
    require_buchi(rhs.acceptance, "union");
    require_same_alphabet(lhs.alphabet, rhs.alphabet, "union");

    const auto offset = lhs.num_states();
    std::vector<std::string> names;
    for (const auto& s : lhs.states)
        names.push_back(s + "@1");
    for (const auto& s : rhs.states)
        names.push_back(s + "@2");
    auto out = build(lhs.alphabet, std::move(names));

    const Rational half(1, 2);
    StateSet f;
    for (int side = 0; side < 2; ++side) {
        const auto* part = side == 0 ? &lhs : &rhs;
        const auto base = side == 0 ? 0 : offset;
        for (StateId q = 0; q < part->num_states(); ++q) {
            out.initial[base + q] = half * part->initial[q];
            for (Symbol a = 0; a < part->alphabet.size(); ++a)
                for (const auto& t : part->row(q, a))
                    out.delta[base + q][a].push_back(Transition{base + t.target, t.probability});
        }
        for (StateId q : final_states(part->acceptance))
            f.push_back(base + q);
    }
    out.acceptance = Buchi{f};
    fill_binary(report, "union", lhs, rhs, out);
    return out;
}

ProbabilisticAutomaton product_streett(const ProbabilisticAutomaton& lhs, const ProbabilisticAutomaton& rhs,
                                       TransformReport* report)
{
    require_buchi(lhs.acceptance, "product");
    require_buchi(rhs.acceptance, "product");
    require_same_alphabet(lhs.alphabet, rhs.alphabet, "product");

    const auto m = rhs.num_states();
    auto id = [m](StateId p, StateId q) { return p * m + q; };
    std::vector<std::string> names;
    for (const auto& p : lhs.states)
        for (const auto& q : rhs.states)
            names.push_back("(" + p + ";" + q + ")");
    auto out = build(lhs.alphabet, std::move(names));

    for (StateId p = 0; p < lhs.num_states(); ++p)
        for (StateId q = 0; q < m; ++q) {
            out.initial[id(p, q)] = lhs.initial[p] * rhs.initial[q];
            for (Symbol a = 0; a < lhs.alphabet.size(); ++a)
                for (const auto& t1 : lhs.row(p, a))
                    for (const auto& t2 : rhs.row(q, a))
                        out.delta[id(p, q)][a].push_back(
                            Transition{id(t1.target, t2.target), t1.probability * t2.probability});
        }

    StateSet f1, f2;
    for (StateId p = 0; p < lhs.num_states(); ++p)
        for (StateId q = 0; q < m; ++q) {
            if (contains(final_states(lhs.acceptance), p))
                f1.push_back(id(p, q));
            if (contains(final_states(rhs.acceptance), q))
                f2.push_back(id(p, q));
        }
    const auto everything = all_states(out.num_states());
    out.acceptance = Streett{{AcceptancePair{f1, everything}, AcceptancePair{f2, everything}}};
    fill_binary(report, "product-streett", lhs, rhs, out);
    return out;
}

ProbabilisticAutomaton intersection(const ProbabilisticAutomaton& lhs, const ProbabilisticAutomaton& rhs,
                                    TransformReport* report)
{
    const auto product = product_streett(lhs, rhs);
    auto out = psa_to_pba(product, report);
    if (report) {
        report->construction = "intersection";
        report->input_states = lhs.num_states() + rhs.num_states();
        report->input_pairs = 0;
        report->notes.insert(report->notes.begin(),
                             "product has " + std::to_string(product.num_states()) + " states and 2 Streett pairs");
    }
    return out;
}

NondeterministicAutomaton limit_determinize(const NondeterministicAutomaton& nba, TransformReport* report)
{
    require_buchi(nba.acceptance, "limit_determinize");
    const auto& f = final_states(nba.acceptance);
    const auto n = nba.num_states();
    const auto sigma = nba.alphabet.size();

    std::vector<std::string> names = nba.states;
    std::vector<std::vector<StateSet>> delta(n, std::vector<StateSet>(sigma));
    std::map<std::pair<StateSet, StateSet>, StateId> index;
    std::vector<std::pair<StateSet, StateSet>> macro;

    auto intern = [&](StateSet s, StateSet b) {
        auto key = std::pair{std::move(s), std::move(b)};
        auto [it, fresh] = index.try_emplace(key, n + macro.size());
        if (fresh) {
            names.push_back(set_name(nba.states, key.first) + "/" + set_name(nba.states, key.second));
            macro.push_back(std::move(key));
            delta.emplace_back(sigma);
        }
        return it->second;
    };
    auto post = [&](const StateSet& s, Symbol a) {
        std::vector<StateId> out;
        for (StateId q : s)
            for (StateId t : nba.successors(q, a))
                out.push_back(t);
        return make_state_set(std::move(out));
    };

    for (StateId q = 0; q < n; ++q)
        for (Symbol a = 0; a < sigma; ++a)
            for (StateId t : nba.successors(q, a)) {
                delta[q][a].push_back(t);
                const StateSet single{t};
                const auto jump = intern(single, intersect(single, f));
                delta[q][a].push_back(jump);
            }

    for (std::size_t i = 0; i < macro.size(); ++i) {
        const auto [s, b] = macro[i];
        for (Symbol a = 0; a < sigma; ++a) {
            const auto next = post(s, a);
            if (next.empty())
                continue;
            const auto fresh = intersect(next, f);
            auto marked = b == s ? fresh : unite(post(b, a), fresh);
            const auto target = intern(next, std::move(marked));
            delta[n + i][a].push_back(target);
        }
    }

    make_unique(names);
    auto out = make_nondeterministic(nba.alphabet, std::move(names));
    for (auto& rows : delta)
        for (auto& row : rows)
            row = make_state_set(std::move(row));
    out.delta = std::move(delta);
    out.initial = nba.initial;
    StateSet accepting;
    for (std::size_t i = 0; i < macro.size(); ++i)
        if (macro[i].first == macro[i].second)
            accepting.push_back(n + i);
    out.acceptance = Buchi{accepting};
    fill(report, "limit-determinize", nba, out,
         {"breakpoint component has " + std::to_string(macro.size()) + " reachable (S, B) states"});
    return out;
}

bool is_limit_deterministic(const NondeterministicAutomaton& nba)
{
    const auto& f = final_states(nba.acceptance);
    std::vector<char> seen(nba.num_states(), 0);
    std::vector<StateId> work(f.begin(), f.end());
    for (StateId q : f)
        seen[q] = 1;
    while (!work.empty()) {
        const auto q = work.back();
        work.pop_back();
        for (Symbol a = 0; a < nba.alphabet.size(); ++a) {
            const auto& succ = nba.successors(q, a);
            if (succ.size() > 1)
                return false;
            for (StateId t : succ)
                if (!seen[t]) {
                    seen[t] = 1;
                    work.push_back(t);
                }
        }
    }
    return true;
}

ProbabilisticAutomaton nba_to_pba(const NondeterministicAutomaton& nba, TransformReport* report)
{
    if (nba.initial.empty())
        throw Error("nba_to_pba needs a nonempty initial set");
    const auto limit = limit_determinize(nba);
    auto out = uniform_resolution(limit);
    fill(report, "nba-to-pba", nba, out,
         {"uniform resolution of a " + std::to_string(limit.num_states()) + "-state limit-deterministic NBA"});
    return out;
}

ProbabilisticAutomaton pra_to_pba(const ProbabilisticAutomaton& pra, TransformReport* report)
{
    const auto* rabin = std::get_if<Rabin>(&pra.acceptance);
    if (!rabin)
        throw Error("pra_to_pba needs a Rabin automaton, got " + kind_name(pra.acceptance));
    const auto n = pra.num_states();
    const auto& pairs = rabin->pairs;
    const auto ell = pairs.size();

    std::vector<std::string> names = pra.states;
    std::vector<std::vector<StateId>> copy(ell, std::vector<StateId>(n, static_cast<StateId>(-1)));
    StateSet f;
    for (std::size_t l = 0; l < ell; ++l)
        for (StateId q = 0; q < n; ++q)
            if (!contains(pairs[l].h, q)) {
                copy[l][q] = names.size();
                if (contains(pairs[l].k, q))
                    f.push_back(names.size());
                names.push_back(pra.states[q] + "^" + std::to_string(l));
            }
    auto out = build(pra.alphabet, std::move(names));
    out.initial = pra.initial;
    out.initial.resize(out.num_states(), Rational(0));

    const Rational share(1, ell + 1);
    for (StateId q = 0; q < n; ++q)
        for (Symbol a = 0; a < pra.alphabet.size(); ++a)
            for (const auto& t : pra.row(q, a)) {
                const Rational part = t.probability * share;
                add_transition(out, q, a, t.target, part);
                for (std::size_t l = 0; l < ell; ++l) {
                    const auto target = copy[l][t.target];
                    add_transition(out, q, a, target == static_cast<StateId>(-1) ? t.target : target, part);
                }
            }
    // A committed run dies on any row that can enter H_l. Inside a BSCC that
    // avoids H_l no such row is ever used.
    for (std::size_t l = 0; l < ell; ++l)
        for (StateId q = 0; q < n; ++q) {
            if (copy[l][q] == static_cast<StateId>(-1))
                continue;
            for (Symbol a = 0; a < pra.alphabet.size(); ++a) {
                const auto& row = pra.row(q, a);
                const bool leaves = std::any_of(row.begin(), row.end(), [&](const Transition& t) {
                    return copy[l][t.target] == static_cast<StateId>(-1);
                });
                if (leaves)
                    continue;
                for (const auto& t : row)
                    add_transition(out, copy[l][q], a, copy[l][t.target], t.probability);
            }
        }

    out.acceptance = Buchi{make_state_set(std::move(f))};
    fill(report, "pra-to-pba", pra, out,
         {"bound (l+1)*|Q| = " + std::to_string((ell + 1) * n),
          "copy l keeps a row only if none of its targets is in H_l; other committed runs die"});
    return out;
}

ProbabilisticAutomaton psa_to_pba(const ProbabilisticAutomaton& psa, TransformReport* report)
{
    const auto* streett = std::get_if<Streett>(&psa.acceptance);
    if (!streett)
        throw Error("psa_to_pba needs a Streett automaton, got " + kind_name(psa.acceptance));
    const auto n = psa.num_states();
    const auto& pairs = streett->pairs;
    const auto ell = pairs.size();

    if (ell == 0) {
        auto out = psa;
        out.acceptance = Buchi{all_states(n)};
        fill(report, "psa-to-pba", psa, out,
             {"no pairs: every infinite run is accepting", "size constant c = 3 (bound |Q| when l = 0)"});
        return out;
    }

    enum Flag : std::size_t { fresh = 0, seen = 1 };
    auto id = [n](StateId q, std::size_t l, std::size_t flag) { return n + (2 * l + flag) * n + q; };

    std::vector<std::string> names = psa.states;
    names.resize(n + 2 * ell * n);
    for (std::size_t l = 0; l < ell; ++l)
        for (std::size_t flag : {fresh, seen})
            for (StateId q = 0; q < n; ++q)
                names[id(q, l, flag)] = psa.states[q] + "^" + std::to_string(l) + (flag == fresh ? "" : "!");
    auto out = build(psa.alphabet, std::move(names));
    out.initial = psa.initial;
    out.initial.resize(out.num_states(), Rational(0));

    const Rational half(1, 2);
    for (StateId q = 0; q < n; ++q)
        for (Symbol a = 0; a < psa.alphabet.size(); ++a)
            for (const auto& t : psa.row(q, a)) {
                add_transition(out, q, a, t.target, t.probability * half);
                add_transition(out, q, a, id(t.target, 0, fresh), t.probability * half);
            }

    for (std::size_t l = 0; l < ell; ++l) {
        const auto advance = (l + 1) % ell;
        for (std::size_t flag : {fresh, seen})
            for (StateId q = 0; q < n; ++q)
                for (Symbol a = 0; a < psa.alphabet.size(); ++a)
                    for (const auto& t : psa.row(q, a)) {
                        const auto from = id(q, l, flag);
                        if (contains(pairs[l].h, t.target)) {
                            add_transition(out, from, a, id(t.target, advance, fresh), t.probability);
                        } else if (flag == seen || contains(pairs[l].k, t.target)) {
                            add_transition(out, from, a, id(t.target, l, seen), t.probability);
                        } else {
                            add_transition(out, from, a, id(t.target, l, fresh), t.probability * half);
                            add_transition(out, from, a, id(t.target, advance, fresh), t.probability * half);
                        }
                    }
    }

    StateSet f;
    for (StateId q = 0; q < n; ++q)
        f.push_back(id(q, 0, fresh));
    out.acceptance = Buchi{f};
    fill(report, "psa-to-pba", psa, out,
         {"size constant c = 3: (2l+1)*|Q| <= 3*l^2*|Q|",
          "reconstructed construction: a pointer cycles through the pairs and waits at pair l until H_l is "
          "visited, or moves on with probability 1/2 while K_l has not been seen"});
    return out;
}

namespace {

struct ZeroOneState {
    bool trap = false;
    StateSet support;
    std::vector<StateId> tokens; ///< oldest first, pairwise distinct
    std::size_t change = 0;      ///< first token index whose identity changed

    auto key() const { return std::tie(trap, support, tokens, change); }
    bool operator<(const ZeroOneState& other) const { return key() < other.key(); }
};

} // namespace

ProbabilisticAutomaton pba_to_zero_one_pra(const ProbabilisticAutomaton& pba, TransformReport* report)
{
    require_buchi(pba.acceptance, "pba_to_zero_one_pra");
    const auto& f = final_states(pba.acceptance);
    const auto n = pba.num_states();
    const auto sigma = pba.alphabet.size();

    std::map<ZeroOneState, StateId> index;
    std::vector<ZeroOneState> states;
    std::vector<std::vector<Distribution>> delta;
    auto intern = [&](ZeroOneState s) {
        auto [it, fresh] = index.try_emplace(s, states.size());
        if (fresh) {
            states.push_back(std::move(s));
            delta.emplace_back(sigma);
        }
        return it->second;
    };
    auto add = [&](StateId from, Symbol a, StateId to, const Rational& p) {
        auto& row = delta[from][a];
        auto it = std::lower_bound(row.begin(), row.end(), to,
                                   [](const Transition& t, StateId target) { return t.target < target; });
        if (it != row.end() && it->target == to)
            it->probability += p;
        else
            row.insert(it, Transition{to, p});
    };

    const auto support0 = pba.initial_support();
    std::vector<std::pair<StateId, Rational>> initial;
    for (StateId q : support0)
        initial.emplace_back(intern(ZeroOneState{false, support0, {q}, 0}), pba.initial[q]);

    const Rational half(1, 2);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto current = states[i];
        for (Symbol a = 0; a < sigma; ++a) {
            if (current.trap) {
                add(i, a, i, Rational(1));
                continue;
            }
            std::vector<StateId> image;
            for (StateId q : current.support)
                for (const auto& t : pba.row(q, a))
                    image.push_back(t.target);
            const auto next_support = make_state_set(std::move(image));
            if (next_support.empty()) {
                add(i, a, intern(ZeroOneState{true, {}, {}, 0}), Rational(1));
                continue;
            }

            // Enumerate the joint moves of all tokens.
            const auto k = current.tokens.size();
            std::vector<std::size_t> choice(k, 0);
            while (true) {
                Rational p = 1;
                std::vector<std::pair<std::size_t, StateId>> alive; // (old index, new state)
                for (std::size_t j = 0; j < k; ++j) {
                    const auto& row = pba.row(current.tokens[j], a);
                    if (row.empty())
                        continue;
                    p *= row[choice[j]].probability;
                    const auto target = row[choice[j]].target;
                    const bool taken = std::any_of(alive.begin(), alive.end(),
                                                   [target](const auto& e) { return e.second == target; });
                    if (!taken)
                        alive.emplace_back(j, target);
                }
                std::size_t change = n;
                for (std::size_t j = 0; j < k; ++j)
                    if (j >= alive.size() || alive[j].first != j) {
                        change = j;
                        break;
                    }
                std::vector<StateId> tokens;
                for (const auto& e : alive)
                    tokens.push_back(e.second);
                std::vector<StateId> free;
                for (StateId q : next_support)
                    if (std::find(tokens.begin(), tokens.end(), q) == tokens.end())
                        free.push_back(q);

                if (free.empty()) {
                    add(i, a, intern(ZeroOneState{false, next_support, tokens, change}), p);
                } else {
                    add(i, a, intern(ZeroOneState{false, next_support, tokens, change}), p * half);
                    const Rational spawn = p * half / Rational(free.size());
                    for (StateId q : free) {
                        auto grown = tokens;
                        grown.push_back(q);
                        add(i, a, intern(ZeroOneState{false, next_support, grown, std::min(change, tokens.size())}),
                            spawn);
                    }
                }

                std::size_t j = 0;
                for (; j < k; ++j) {
                    const auto size = pba.row(current.tokens[j], a).size();
                    if (size > 0 && ++choice[j] < size)
                        break;
                    choice[j] = 0;
                }
                if (j == k)
                    break;
            }
        }
    }

    std::vector<std::string> names;
    for (const auto& s : states) {
        if (s.trap) {
            names.push_back("trap");
            continue;
        }
        std::string name = set_name(pba.states, s.support) + "[";
        for (std::size_t j = 0; j < s.tokens.size(); ++j)
            name += (j ? "+" : "") + pba.states[s.tokens[j]];
        names.push_back(name + "]" + std::to_string(s.change));
    }
    auto out = build(pba.alphabet, std::move(names));
    out.delta = std::move(delta);
    for (const auto& [state, mass] : initial)
        out.initial[state] += mass;

    Rabin rabin;
    for (std::size_t l = 0; l < n; ++l) {
        AcceptancePair pair;
        for (StateId s = 0; s < states.size(); ++s) {
            if (states[s].trap)
                continue;
            if (states[s].change <= l)
                pair.h.push_back(s);
            if (l < states[s].tokens.size() && contains(f, states[s].tokens[l]))
                pair.k.push_back(s);
        }
        rabin.pairs.push_back(std::move(pair));
    }
    out.acceptance = std::move(rabin);
    fill(report, "pba-to-01-pra", pba, out,
         {"reconstructed construction: tracks the reachable support and up to n distinct sample runs ordered by "
          "age; pair l fires when the l oldest runs persist and run l visits F infinitely often"});
    return out;
}

ProbabilisticAutomaton complement(const ProbabilisticAutomaton& pba, TransformReport* report)
{
    TransformReport inner;
    const auto zero_one = pba_to_zero_one_pra(pba, &inner);
    auto out = psa_to_pba(dualize_pairs(zero_one), report);
    if (report) {
        report->construction = "complement";
        report->input_states = pba.num_states();
        report->input_pairs = 0;
        report->notes.insert(report->notes.begin(), "0/1 PRA has " + std::to_string(zero_one.num_states())
                                                        + " states and " + std::to_string(pair_count(zero_one.acceptance))
                                                        + " pairs; its dual PSA is converted to a PBA");
    }
    return out;
}

} // namespace pomega
