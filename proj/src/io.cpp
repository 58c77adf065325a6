#include "pomega/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace pomega::io {

using pomega::to_string;

std::string to_string(FileType type)
{
    switch (type) {
    case FileType::pba: return "pba";
    case FileType::pra: return "pra";
    case FileType::psa: return "psa";
    case FileType::nba: return "nba";
    case FileType::nra: return "nra";
    case FileType::nsa: return "nsa";
    case FileType::pomdp: return "pomdp";
    default: return "mdp";
    }
}

std::string Diagnostic::str() const
{
    std::string out;
    if (line)
        out += "line " + std::to_string(line);
    if (column)
        out += ", column " + std::to_string(column);
    if (!out.empty())
        out += ": ";
    return out + message;
}

namespace {

std::string join(const std::vector<Diagnostic>& diagnostics)
{
    std::string out;
    for (const auto& d : diagnostics)
        out += (out.empty() ? "" : "\n") + d.str();
    return out;
}

} // namespace

ParseFailure::ParseFailure(std::vector<Diagnostic> diagnostics, bool validation)
    : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)), validation_(validation)
{
}

namespace {

struct Token {
    std::string text;
    std::size_t column;
};

std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i >= line.size() || line[i] == '#')
            break;
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#')
            ++i;
        out.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    return out;
}

const std::map<std::string, FileType> type_names{
    {"pba", FileType::pba}, {"pra", FileType::pra},     {"psa", FileType::psa}, {"nba", FileType::nba},
    {"nra", FileType::nra}, {"nsa", FileType::nsa}, {"pomdp", FileType::pomdp}, {"mdp", FileType::mdp},
};

bool probabilistic(FileType t)
{
    return t == FileType::pba || t == FileType::pra || t == FileType::psa || t == FileType::pomdp
           || t == FileType::mdp;
}

bool buchi_type(FileType t) { return t == FileType::pba || t == FileType::nba; }
bool pair_type(FileType t)
{
    return t == FileType::pra || t == FileType::psa || t == FileType::nra || t == FileType::nsa;
}

struct StateDecl {
    std::string name;
    std::size_t line;
    bool bare_init = false;
    std::optional<Rational> init;
    std::optional<std::string> obs;
};

struct EdgeDecl {
    std::size_t line;
    Token from, letter, to;
    std::optional<Token> prob;
};

struct SetRef {
    std::size_t line;
    std::vector<Token> states;
};

class Parser {
public:
    ParsedFile run(std::string_view text)
    {
        std::size_t number = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos)
                end = text.size();
            auto line = text.substr(start, end - start);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            ++number;
            handle(number, tokenize(line));
            start = end + 1;
        }
        if (!type_)
            error(0, 0, "missing 'type' declaration");
        if (!alphabet_)
            error(0, 0, "missing 'alphabet' declaration");
        if (!errors_.empty())
            throw ParseFailure(errors_, false);
        auto parsed = assemble();
        if (!errors_.empty())
            throw ParseFailure(errors_, false);
        return parsed;
    }

private:
    void error(std::size_t line, std::size_t column, std::string message)
    {
        errors_.push_back({line, column, std::move(message)});
    }

    void handle(std::size_t line, const std::vector<Token>& tokens)
    {
        if (tokens.empty())
            return;
        const auto& head = tokens[0].text;
        if (!type_ && head != "type") {
            if (!reported_missing_type_)
                error(line, tokens[0].column, "expected 'type' declaration before '" + head + "'");
            reported_missing_type_ = true;
            return;
        }
        if (head == "type")
            on_type(line, tokens);
        else if (head == "alphabet")
            on_alphabet(line, tokens);
        else if (head == "state")
            on_state(line, tokens);
        else if (head == "edge")
            on_edge(line, tokens);
        else if (head == "acc")
            on_acc(line, tokens);
        else
            error(line, tokens[0].column,
                  "expected one of 'type', 'alphabet', 'state', 'edge', 'acc', got '" + head + "'");
    }

    void on_type(std::size_t line, const std::vector<Token>& tokens)
    {
        if (type_) {
            error(line, tokens[0].column, "duplicate 'type' declaration");
            return;
        }
        if (tokens.size() != 2) {
            error(line, tokens[0].column, "expected 'type' followed by one of pba pra psa nba nra nsa pomdp mdp");
            return;
        }
        const auto it = type_names.find(tokens[1].text);
        if (it == type_names.end()) {
            error(line, tokens[1].column, "unknown automaton type '" + tokens[1].text + "'");
            type_ = FileType::pba; // keep going to report later problems
            return;
        }
        type_ = it->second;
    }

    void on_alphabet(std::size_t line, const std::vector<Token>& tokens)
    {
        if (alphabet_) {
            error(line, tokens[0].column, "duplicate 'alphabet' declaration");
            return;
        }
        std::vector<std::string> symbols;
        for (std::size_t i = 1; i < tokens.size(); ++i)
            symbols.push_back(tokens[i].text);
        try {
            alphabet_ = Alphabet(std::move(symbols));
        } catch (const Error& e) {
            error(line, tokens[0].column, e.what());
            alphabet_ = Alphabet({"?"});
        }
    }

    void on_state(std::size_t line, const std::vector<Token>& tokens)
    {
        if (tokens.size() < 2) {
            error(line, tokens[0].column, "expected a state name after 'state'");
            return;
        }
        const auto& name = tokens[1];
        if (name.text == "/" || name.text == "H:" || name.text == "K:" || name.text.find('|') != std::string::npos
            || name.text.rfind("init", 0) == 0 || name.text.rfind("obs=", 0) == 0) {
            error(line, name.column, "invalid state name '" + name.text + "'");
            return;
        }
        if (state_index_.count(name.text)) {
            error(line, name.column, "duplicate state '" + name.text + "'");
            return;
        }
        StateDecl decl;
        decl.name = name.text;
        decl.line = line;
        for (std::size_t i = 2; i < tokens.size(); ++i) {
            const auto& opt = tokens[i];
            if (opt.text == "init") {
                decl.bare_init = true;
            } else if (opt.text.rfind("init=", 0) == 0) {
                try {
                    decl.init = parse_rational(opt.text.substr(5));
                } catch (const std::invalid_argument&) {
                    error(line, opt.column + 5, "expected a rational initial probability (p/q or integer), got '"
                                                    + opt.text.substr(5) + "'");
                }
            } else if (opt.text.rfind("obs=", 0) == 0 && opt.text.size() > 4) {
                decl.obs = opt.text.substr(4);
            } else {
                error(line, opt.column, "expected 'init', 'init=R' or 'obs=CLASS', got '" + opt.text + "'");
            }
        }
        state_index_.emplace(decl.name, states_.size());
        states_.push_back(std::move(decl));
    }

    void on_edge(std::size_t line, const std::vector<Token>& tokens)
    {
        if (tokens.size() != 4 && tokens.size() != 5) {
            error(line, tokens[0].column, "expected 'edge FROM LETTER TO [PROB]'");
            return;
        }
        EdgeDecl edge{line, tokens[1], tokens[2], tokens[3], std::nullopt};
        if (tokens.size() == 5)
            edge.prob = tokens[4];
        edges_.push_back(std::move(edge));
    }

    void on_acc(std::size_t line, const std::vector<Token>& tokens)
    {
        if (tokens.size() < 2) {
            error(line, tokens[0].column, "expected 'acc buchi ...' or 'acc pair H: ... / K: ...'");
            return;
        }
        if (tokens[1].text == "buchi") {
            if (buchi_) {
                error(line, tokens[0].column, "duplicate 'acc buchi' line");
                return;
            }
            buchi_ = SetRef{line, {tokens.begin() + 2, tokens.end()}};
            return;
        }
        if (tokens[1].text != "pair") {
            error(line, tokens[1].column, "expected 'buchi' or 'pair', got '" + tokens[1].text + "'");
            return;
        }
        if (tokens.size() < 3 || tokens[2].text != "H:") {
            error(line, tokens.size() < 3 ? tokens[1].column : tokens[2].column, "expected 'H:' after 'acc pair'");
            return;
        }
        const auto slash = std::find_if(tokens.begin() + 3, tokens.end(), [](const Token& t) { return t.text == "/"; });
        if (slash == tokens.end() || slash + 1 == tokens.end() || (slash + 1)->text != "K:") {
            error(line, tokens[2].column, "expected '/ K:' separating the two sets of a pair");
            return;
        }
        pairs_.push_back({SetRef{line, {tokens.begin() + 3, slash}}, SetRef{line, {slash + 2, tokens.end()}}});
    }

    std::optional<StateId> resolve(std::size_t line, const Token& token)
    {
        const auto it = state_index_.find(token.text);
        if (it == state_index_.end()) {
            error(line, token.column, "unknown state '" + token.text + "'");
            return std::nullopt;
        }
        return it->second;
    }

    StateSet resolve_set(const SetRef& ref)
    {
        std::vector<StateId> out;
        for (const auto& token : ref.states)
            if (auto id = resolve(ref.line, token))
                out.push_back(*id);
        return make_state_set(std::move(out));
    }

    ParsedFile assemble()
    {
        const auto type = *type_;
        const bool prob = probabilistic(type);
        std::vector<std::string> names;
        for (const auto& s : states_) {
            names.push_back(s.name);
            if (prob && s.bare_init)
                error(s.line, 0, "state " + s.name + ": probabilistic types need 'init=R'");
            if (!prob && s.init)
                error(s.line, 0, "state " + s.name + ": nondeterministic types use a bare 'init'");
            if (s.obs && type != FileType::pomdp)
                error(s.line, 0, "state " + s.name + ": 'obs=' is only allowed for pomdp");
        }

        if ((type == FileType::pomdp || type == FileType::mdp) && (buchi_ || !pairs_.empty()))
            error(buchi_ ? buchi_->line : pairs_.front().first.line, 1, to_string(type) + " files take no 'acc' lines");
        if (buchi_ && !buchi_type(type))
            error(buchi_->line, 1, "'acc buchi' needs type pba or nba");
        if (!pairs_.empty() && !pair_type(type))
            error(pairs_.front().first.line, 1, "'acc pair' needs type pra, psa, nra or nsa");

        AcceptanceCondition acc = Buchi{};
        if (buchi_type(type) && buchi_) {
            acc = Buchi{resolve_set(*buchi_)};
        } else if (pair_type(type)) {
            std::vector<AcceptancePair> pairs;
            for (const auto& [h, k] : pairs_)
                pairs.push_back({resolve_set(h), resolve_set(k)});
            if (type == FileType::pra || type == FileType::nra)
                acc = Rabin{std::move(pairs)};
            else
                acc = Streett{std::move(pairs)};
        }

        std::set<std::tuple<StateId, Symbol, StateId>> seen;
        ProbabilisticAutomaton pa = make_probabilistic(*alphabet_, names);
        NondeterministicAutomaton na = make_nondeterministic(*alphabet_, names);
        for (const auto& e : edges_) {
            const auto from = resolve(e.line, e.from);
            const auto to = resolve(e.line, e.to);
            const auto letter = alphabet_->find(e.letter.text);
            if (!letter)
                error(e.line, e.letter.column, "symbol '" + e.letter.text + "' is not in the alphabet");
            std::optional<Rational> p;
            if (prob && !e.prob) {
                error(e.line, e.to.column + e.to.text.size(), "expected a rational probability after the target state");
            } else if (!prob && e.prob) {
                error(e.line, e.prob->column, "nondeterministic types take no edge probabilities");
            } else if (e.prob) {
                try {
                    p = parse_rational(e.prob->text);
                } catch (const std::invalid_argument&) {
                    error(e.line, e.prob->column,
                          "expected a rational probability (p/q or integer), got '" + e.prob->text + "'");
                }
            }
            if (!from || !to || !letter || (prob && !p))
                continue;
            if (!seen.emplace(*from, *letter, *to).second) {
                error(e.line, e.from.column, "duplicate edge " + e.from.text + " " + e.letter.text + " " + e.to.text);
                continue;
            }
            if (prob)
                add_transition(pa, *from, *letter, *to, *p);
            else
                add_transition(na, *from, *letter, *to);
        }
        if (!errors_.empty())
            return {};

        ParsedFile out{type, {}};
        if (type == FileType::pomdp || type == FileType::mdp) {
            Pomdp m;
            m.states = names;
            m.actions = *alphabet_;
            m.delta = std::move(pa.delta);
            for (const auto& s : states_)
                m.initial.push_back(s.init.value_or(Rational(0)));
            for (const auto& s : states_) {
                const auto label = type == FileType::mdp ? s.name : s.obs.value_or(s.name);
                auto it = std::find(m.observation_names.begin(), m.observation_names.end(), label);
                if (it == m.observation_names.end()) {
                    m.observation_names.push_back(label);
                    it = m.observation_names.end() - 1;
                }
                m.observation.push_back(static_cast<std::size_t>(it - m.observation_names.begin()));
            }
            out.model = std::move(m);
        } else if (prob) {
            for (std::size_t q = 0; q < states_.size(); ++q)
                pa.initial[q] = states_[q].init.value_or(Rational(0));
            pa.acceptance = std::move(acc);
            out.model = std::move(pa);
        } else {
            for (std::size_t q = 0; q < states_.size(); ++q)
                if (states_[q].bare_init)
                    na.initial.push_back(q);
            na.acceptance = std::move(acc);
            out.model = std::move(na);
        }
        return out;
    }

    std::optional<FileType> type_;
    std::optional<Alphabet> alphabet_;
    std::vector<StateDecl> states_;
    std::map<std::string, StateId> state_index_;
    std::vector<EdgeDecl> edges_;
    std::optional<SetRef> buchi_;
    std::vector<std::pair<SetRef, SetRef>> pairs_;
    std::vector<Diagnostic> errors_;
    bool reported_missing_type_ = false;
};

} // namespace

ParsedFile parse_automaton(std::string_view text)
{
    auto parsed = Parser().run(text);
    ValidationReport report;
    if (const auto* pa = std::get_if<ProbabilisticAutomaton>(&parsed.model))
        report = validate_automaton(*pa);
    else if (const auto* na = std::get_if<NondeterministicAutomaton>(&parsed.model))
        report = validate_automaton(*na);
    else
        report = validate_pomdp(std::get<Pomdp>(parsed.model));
    if (!report.ok()) {
        std::vector<Diagnostic> diagnostics;
        for (auto& v : report.violations)
            diagnostics.push_back({0, 0, std::move(v)});
        throw ParseFailure(std::move(diagnostics), true);
    }
    return parsed;
}

namespace {

std::string names_of(const std::vector<std::string>& names, const StateSet& set)
{
    std::string out;
    for (StateId q : set)
        out += " " + names[q];
    return out;
}

void write_acceptance(std::ostringstream& out, const AcceptanceCondition& acc, const std::vector<std::string>& names)
{
    if (const auto* buchi = std::get_if<Buchi>(&acc)) {
        out << "acc buchi" << names_of(names, buchi->final_states) << "\n";
        return;
    }
    const auto& pairs = std::holds_alternative<Rabin>(acc) ? std::get<Rabin>(acc).pairs : std::get<Streett>(acc).pairs;
    for (const auto& pair : pairs)
        out << "acc pair H:" << names_of(names, pair.h) << " / K:" << names_of(names, pair.k) << "\n";
}

void write_alphabet(std::ostringstream& out, const Alphabet& alphabet)
{
    out << "alphabet";
    for (const auto& s : alphabet.symbols())
        out << " " << s;
    out << "\n";
}

void write_edges(std::ostringstream& out, const std::vector<std::string>& names, const Alphabet& alphabet,
                 const std::vector<std::vector<Distribution>>& delta)
{
    for (StateId q = 0; q < delta.size(); ++q)
        for (Symbol a = 0; a < alphabet.size(); ++a)
            for (const auto& t : delta[q][a])
                out << "edge " << names[q] << " " << alphabet.symbol(a) << " " << names[t.target] << " "
                    << to_string(t.probability) << "\n";
}

} // namespace

std::string serialize(const ProbabilisticAutomaton& automaton)
{
    std::ostringstream out;
    const char* type = std::holds_alternative<Buchi>(automaton.acceptance)   ? "pba"
                       : std::holds_alternative<Rabin>(automaton.acceptance) ? "pra"
                                                                             : "psa";
    out << "type " << type << "\n";
    write_alphabet(out, automaton.alphabet);
    for (StateId q = 0; q < automaton.num_states(); ++q) {
        out << "state " << automaton.states[q];
        if (!is_zero(automaton.initial[q]))
            out << " init=" << to_string(automaton.initial[q]);
        out << "\n";
    }
    write_edges(out, automaton.states, automaton.alphabet, automaton.delta);
    write_acceptance(out, automaton.acceptance, automaton.states);
    return out.str();
}

std::string serialize(const NondeterministicAutomaton& automaton)
{
    std::ostringstream out;
    const char* type = std::holds_alternative<Buchi>(automaton.acceptance)   ? "nba"
                       : std::holds_alternative<Rabin>(automaton.acceptance) ? "nra"
                                                                             : "nsa";
    out << "type " << type << "\n";
    write_alphabet(out, automaton.alphabet);
    for (StateId q = 0; q < automaton.num_states(); ++q)
        out << "state " << automaton.states[q] << (contains(automaton.initial, q) ? " init" : "") << "\n";
    for (StateId q = 0; q < automaton.num_states(); ++q)
        for (Symbol a = 0; a < automaton.alphabet.size(); ++a)
            for (StateId t : automaton.successors(q, a))
                out << "edge " << automaton.states[q] << " " << automaton.alphabet.symbol(a) << " "
                    << automaton.states[t] << "\n";
    write_acceptance(out, automaton.acceptance, automaton.states);
    return out.str();
}

std::string serialize(const Pomdp& pomdp)
{
    const bool mdp = is_fully_observable(pomdp) && pomdp.observation_names == pomdp.states
                     && std::is_sorted(pomdp.observation.begin(), pomdp.observation.end());
    std::ostringstream out;
    out << "type " << (mdp ? "mdp" : "pomdp") << "\n";
    write_alphabet(out, pomdp.actions);
    for (StateId q = 0; q < pomdp.num_states(); ++q) {
        out << "state " << pomdp.states[q];
        if (!is_zero(pomdp.initial[q]))
            out << " init=" << to_string(pomdp.initial[q]);
        if (!mdp)
            out << " obs=" << pomdp.observation_names[pomdp.observation[q]];
        out << "\n";
    }
    write_edges(out, pomdp.states, pomdp.actions, pomdp.delta);
    return out.str();
}

std::string serialize(const Model& model)
{
    return std::visit([](const auto& m) { return serialize(m); }, model);
}

namespace {

Word parse_part(std::string_view part, const Alphabet& alphabet)
{
    Word out;
    const auto tokens = tokenize(part);
    if (tokens.empty())
        return out;
    if (tokens.size() > 1) {
        for (const auto& t : tokens)
            out.push_back(alphabet.index(t.text));
        return out;
    }
    const auto& text = tokens.front().text;
    if (auto whole = alphabet.find(text)) {
        out.push_back(*whole);
        return out;
    }
    for (char c : text) {
        const auto symbol = alphabet.find(std::string_view(&c, 1));
        if (!symbol)
            throw Error("cannot split '" + text + "' into symbols of the alphabet");
        out.push_back(*symbol);
    }
    return out;
}

bool single_characters(const Alphabet& alphabet)
{
    const auto& s = alphabet.symbols();
    return std::all_of(s.begin(), s.end(), [](const std::string& x) { return x.size() == 1; });
}

} // namespace

LassoWord parse_lasso(std::string_view text, const Alphabet& alphabet)
{
    const auto bar = text.find('|');
    if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos)
        throw Error("lasso must have the form STEM|LOOP with exactly one '|', got '" + std::string(text) + "'");
    LassoWord out{parse_part(text.substr(0, bar), alphabet), parse_part(text.substr(bar + 1), alphabet)};
    if (out.loop.empty())
        throw Error("lasso loop must be nonempty");
    return out;
}

Word parse_word(std::string_view text, const Alphabet& alphabet)
{
    if (text.find('|') != std::string_view::npos)
        throw Error("a finite word cannot contain '|'");
    return parse_part(text, alphabet);
}

std::string format_word(const Word& word, const Alphabet& alphabet)
{
    const bool compact = single_characters(alphabet);
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i && !compact)
            out += ' ';
        out += alphabet.symbol(word[i]);
    }
    return out;
}

std::string format_lasso(const LassoWord& word, const Alphabet& alphabet)
{
    const bool compact = single_characters(alphabet);
    const auto stem = format_word(word.stem, alphabet);
    const auto loop = format_word(word.loop, alphabet);
    if (compact)
        return stem + "|" + loop;
    return stem + (stem.empty() ? "| " : " | ") + loop;
}

} // namespace pomega::io
