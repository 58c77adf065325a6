#include "pomega/analysis.hpp"
#include "pomega/decide.hpp"
#include "pomega/gallery.hpp"
#include "pomega/io.hpp"
#include "pomega/transform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pomega;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

struct Usage : Error {
    using Error::Error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Usage("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

io::ParsedFile load(const std::string& path)
{
    try {
        return io::parse_automaton(read_file(path));
    } catch (const io::ParseFailure& e) {
        for (const auto& d : e.diagnostics())
            std::cerr << path << ": " << d.str() << "\n";
        throw Usage(e.validation() ? "invalid automaton" : "parse error");
    }
}

ProbabilisticAutomaton load_probabilistic(const std::string& path)
{
    auto parsed = load(path);
    if (auto* pa = std::get_if<ProbabilisticAutomaton>(&parsed.model))
        return std::move(*pa);
    throw Usage(path + ": expected a pba, pra or psa file, got " + io::to_string(parsed.type));
}

NondeterministicAutomaton load_nondeterministic(const std::string& path)
{
    auto parsed = load(path);
    if (auto* na = std::get_if<NondeterministicAutomaton>(&parsed.model))
        return std::move(*na);
    throw Usage(path + ": expected an nba, nra or nsa file, got " + io::to_string(parsed.type));
}

std::string show(const Rational& value) { return to_string(value) + " (~" + to_decimal(value) + ")"; }

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Usage("cannot write " + path);
    out << text;
}

void print_report(const TransformReport& r, std::ostream& out)
{
    out << "construction: " << r.construction << "\n";
    out << "input: " << r.input_states << " states, " << r.input_pairs << " pairs (size " << r.input_size() << ")\n";
    out << "output: " << r.output_states << " states, " << r.output_pairs << " pairs (size " << r.output_size()
        << ")\n";
    for (const auto& note : r.notes)
        out << "note: " << note << "\n";
}

// The report goes to stdout unless the automaton itself does.
void emit_transform(const io::Model& model, const TransformReport& report, const std::string& output)
{
    const bool to_stdout = output.empty() || output == "-";
    print_report(report, to_stdout ? std::cerr : std::cout);
    write_output(output, io::serialize(model));
}

StateSet parse_targets(const std::string& text, const std::vector<std::string>& states)
{
    std::vector<StateId> out;
    std::stringstream in(text);
    std::string name;
    while (std::getline(in, name, ',')) {
        if (name.empty())
            continue;
        const auto it = std::find(states.begin(), states.end(), name);
        if (it == states.end())
            throw Usage("unknown target state '" + name + "'");
        out.push_back(static_cast<StateId>(it - states.begin()));
    }
    return make_state_set(std::move(out));
}

Rational parse_lambda(const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw Usage("--lambda expects a rational p/q, got '" + text + "'");
    }
}

void print_certificate(const Pomdp& pomdp, const StrategyCertificate& cert)
{
    if (cert.word) {
        std::cout << "strategy: play the word " << io::format_lasso(*cert.word, pomdp.actions) << "\n";
        return;
    }
    std::cout << "strategy: " << cert.memory_count << " memory state(s)\n";
    for (std::size_t o = 0; o < pomdp.num_observations(); ++o)
        std::cout << "  start " << pomdp.observation_names[o] << " -> m" << cert.initial[o] << "\n";
    for (std::size_t m = 0; m < cert.memory_count; ++m)
        for (std::size_t o = 0; o < pomdp.num_observations(); ++o) {
            const auto action = cert.choice[m][o];
            std::cout << "  m" << m << " " << pomdp.observation_names[o] << ": "
                      << (action == StrategyCertificate::no_action ? std::string("-") : pomdp.actions.symbol(action))
                      << ", then";
            for (std::size_t next = 0; next < pomdp.num_observations(); ++next)
                std::cout << " " << pomdp.observation_names[next] << "->m" << cert.update[m][next];
            std::cout << "\n";
        }
}

void print_diagnostics(const std::vector<std::string>& diagnostics)
{
    for (const auto& d : diagnostics)
        std::cout << "note: " << d << "\n";
}

int print_outcome(const Pomdp& pomdp, const DecisionOutcome& outcome)
{
    std::cout << "verdict: " << to_string(outcome.verdict) << "\n";
    if (outcome.certificate)
        print_certificate(pomdp, *outcome.certificate);
    print_diagnostics(outcome.diagnostics);
    return outcome.verdict == Verdict::yes ? exit_ok : exit_negative;
}

// A pomdp or mdp file, or a pba lifted to a single observation class.
std::pair<Pomdp, StateSet> load_pomdp(const std::string& path)
{
    auto parsed = load(path);
    if (auto* p = std::get_if<Pomdp>(&parsed.model))
        return {std::move(*p), {}};
    if (auto* pa = std::get_if<ProbabilisticAutomaton>(&parsed.model); pa && is_buchi(pa->acceptance))
        return pba_as_pomdp(*pa);
    throw Usage(path + ": expected a pomdp, mdp or pba file, got " + io::to_string(parsed.type));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probabilistic omega-automata toolkit"};
    app.require_subcommand(1);

    std::string file, file2, output, word, prefix, semantics = "probable", lambda, op, question, objective, mode,
                                                         target, name;
    std::size_t stem_bound = 0, loop_bound = 0, bound = 0, samples = 10000, n = 0;
    std::uint64_t seed = 1;

    auto* validate = app.add_subcommand("validate", "Parse and validate an automaton file");
    validate->add_option("file", file)->required();

    auto* prob = app.add_subcommand("prob", "Exact acceptance probability of a lasso word");
    prob->add_option("file", file)->required();
    prob->add_option("--word", word, "STEM|LOOP")->required();

    auto* prefix_prob = app.add_subcommand("prefix-prob", "Probability of consuming a finite prefix");
    prefix_prob->add_option("file", file)->required();
    prefix_prob->add_option("--prefix", prefix)->required();

    auto* member_cmd = app.add_subcommand("member", "Lasso membership");
    member_cmd->add_option("file", file)->required();
    member_cmd->add_option("--word", word, "STEM|LOOP")->required();
    member_cmd->add_option("--semantics", semantics)
        ->check(CLI::IsMember({"probable", "almost-sure", "threshold"}));
    member_cmd->add_option("--lambda", lambda, "threshold p/q");

    auto* transform = app.add_subcommand("transform", "Apply a construction");
    transform->add_option("file", file)->required();
    transform->add_option("--op", op)
        ->required()
        ->check(CLI::IsMember({"limitdet", "nba2pba", "pra2pba", "psa2pba", "to01pra", "complement"}));
    transform->add_option("-o,--output", output);

    std::vector<CLI::App*> binary;
    for (const char* cmd : {"union", "product", "intersect"}) {
        auto* sub = app.add_subcommand(cmd, std::string("Binary construction: ") + cmd);
        sub->add_option("first", file)->required();
        sub->add_option("second", file2)->required();
        sub->add_option("-o,--output", output);
        binary.push_back(sub);
    }

    auto* decide = app.add_subcommand("decide", "Qualitative questions on a PBA");
    decide->add_option("file", file)->required();
    decide->add_option("--question", question)
        ->required()
        ->check(CLI::IsMember({"as-empty", "as-universal", "pos-empty"}));
    decide->add_option("--stem-bound", stem_bound);
    decide->add_option("--loop-bound", loop_bound);

    auto* pomdp_cmd = app.add_subcommand("pomdp-decide", "Belief-support strategy synthesis");
    pomdp_cmd->add_option("file", file)->required();
    pomdp_cmd->add_option("--objective", objective)->required()->check(CLI::IsMember({"as-buchi", "pos-persist"}));
    pomdp_cmd->add_option("--target", target, "comma separated state names");
    pomdp_cmd->add_option("--bound", bound, "candidate strategy limit");

    auto* mdp_cmd = app.add_subcommand("mdp-decide", "Qualitative MDP analysis");
    mdp_cmd->add_option("file", file)->required();
    mdp_cmd->add_option("--objective", objective)
        ->required()
        ->check(CLI::IsMember({"buchi", "recurrence", "persist", "persistence"}));
    mdp_cmd->add_option("--mode", mode)->required()->check(CLI::IsMember({"almost-sure", "positive"}));
    mdp_cmd->add_option("--target", target)->required();

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of the acceptance probability");
    simulate->add_option("file", file)->required();
    simulate->add_option("--word", word)->required();
    simulate->add_option("--samples", samples);
    simulate->add_option("--seed", seed);

    auto* gallery_cmd = app.add_subcommand("gallery", "Export a built-in automaton");
    gallery_cmd->add_option("--name", name)->required()->check(CLI::IsMember(gallery::names()));
    gallery_cmd->add_option("--lambda", lambda);
    gallery_cmd->add_option("--n", n);
    gallery_cmd->add_option("-o,--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (validate->parsed()) {
            try {
                const auto parsed = io::parse_automaton(read_file(file));
                std::size_t states = std::visit([](const auto& m) { return m.num_states(); }, parsed.model);
                std::cout << "valid " << io::to_string(parsed.type) << ", " << states << " states\n";
                return exit_ok;
            } catch (const io::ParseFailure& e) {
                for (const auto& d : e.diagnostics())
                    std::cerr << file << ": " << d.str() << "\n";
                return e.validation() ? exit_negative : exit_usage;
            }
        }
        if (prob->parsed()) {
            const auto pa = load_probabilistic(file);
            std::cout << show(acceptance_probability(pa, io::parse_lasso(word, pa.alphabet))) << "\n";
            return exit_ok;
        }
        if (prefix_prob->parsed()) {
            const auto pa = load_probabilistic(file);
            std::cout << show(prefix_consumption_probability(pa, io::parse_word(prefix, pa.alphabet))) << "\n";
            return exit_ok;
        }
        if (member_cmd->parsed()) {
            auto parsed = load(file);
            bool accepted = false;
            if (const auto* na = std::get_if<NondeterministicAutomaton>(&parsed.model)) {
                if (semantics != "probable" || !lambda.empty())
                    throw Usage("nondeterministic automata take no --semantics or --lambda");
                accepted = nondet_lasso_member(*na, io::parse_lasso(word, na->alphabet));
            } else if (const auto* pa = std::get_if<ProbabilisticAutomaton>(&parsed.model)) {
                Semantics sem = Semantics::probable();
                if (semantics == "almost-sure")
                    sem = Semantics::almost_sure();
                if (semantics == "threshold") {
                    if (lambda.empty())
                        throw Usage("--semantics threshold needs --lambda");
                    sem = Semantics::threshold(parse_lambda(lambda));
                } else if (!lambda.empty()) {
                    throw Usage("--lambda is only used with --semantics threshold");
                }
                accepted = member(*pa, io::parse_lasso(word, pa->alphabet), sem);
            } else {
                throw Usage("member needs an automaton file, got " + io::to_string(parsed.type));
            }
            std::cout << (accepted ? "member" : "not a member") << "\n";
            return accepted ? exit_ok : exit_negative;
        }
        if (transform->parsed()) {
            TransformReport report;
            io::Model result;
            if (op == "limitdet") {
                result = limit_determinize(load_nondeterministic(file), &report);
            } else if (op == "nba2pba") {
                result = nba_to_pba(load_nondeterministic(file), &report);
            } else {
                const auto pa = load_probabilistic(file);
                if (op == "pra2pba")
                    result = pra_to_pba(pa, &report);
                else if (op == "psa2pba")
                    result = psa_to_pba(pa, &report);
                else if (op == "to01pra")
                    result = pba_to_zero_one_pra(pa, &report);
                else
                    result = complement(pa, &report);
            }
            emit_transform(result, report, output);
            return exit_ok;
        }
        for (std::size_t i = 0; i < binary.size(); ++i) {
            if (!binary[i]->parsed())
                continue;
            const auto lhs = load_probabilistic(file);
            const auto rhs = load_probabilistic(file2);
            TransformReport report;
            io::Model result = i == 0   ? union_of(lhs, rhs, &report)
                               : i == 1 ? product_streett(lhs, rhs, &report)
                                        : intersection(lhs, rhs, &report);
            emit_transform(result, report, output);
            return exit_ok;
        }
        if (decide->parsed()) {
            const auto pa = load_probabilistic(file);
            const SearchBounds bounds{stem_bound, loop_bound};
            if (question == "as-universal") {
                const auto outcome = as_universal(pa, bounds);
                if (outcome.refuted) {
                    std::cout << "verdict: not universal\n";
                    std::cout << "witness: " << io::format_lasso(*outcome.witness, pa.alphabet) << "\n";
                    std::cout << "probability: " << show(outcome.witness_probability) << "\n";
                } else {
                    std::cout << "verdict: universal up to stem bound " << outcome.bounds.stem << ", loop bound "
                              << outcome.bounds.loop << "\n";
                }
                print_diagnostics(outcome.diagnostics);
                return outcome.refuted ? exit_negative : exit_ok;
            }
            const auto outcome = question == "as-empty" ? as_empty(pa, bounds) : positive_empty_bounded(pa, bounds);
            const char* label = outcome.verdict == Verdict::yes  ? "nonempty"
                                : outcome.verdict == Verdict::no ? "empty"
                                                                 : "unknown";
            std::cout << "verdict: " << label << "\n";
            if (outcome.witness) {
                std::cout << "witness: " << io::format_lasso(*outcome.witness, pa.alphabet) << "\n";
                std::cout << "probability: " << show(acceptance_probability(pa, *outcome.witness)) << "\n";
            }
            print_diagnostics(outcome.diagnostics);
            return outcome.verdict == Verdict::yes ? exit_ok : exit_negative;
        }
        if (pomdp_cmd->parsed()) {
            auto [pomdp, default_target] = load_pomdp(file);
            Objective obj;
            obj.kind = objective == "as-buchi" ? ObjectiveKind::recurrence : ObjectiveKind::persistence;
            obj.mode = objective == "as-buchi" ? ObjectiveMode::almost_sure : ObjectiveMode::positive;
            if (!target.empty())
                obj.target = parse_targets(target, pomdp.states);
            else if (!default_target.empty())
                obj.target = default_target;
            else
                throw Usage("--target is required for pomdp and mdp files");
            std::cout << "objective: " << describe(obj) << "\n";
            return print_outcome(pomdp, pomdp_decide(pomdp, obj, bound));
        }
        if (mdp_cmd->parsed()) {
            auto [mdp, unused] = load_pomdp(file);
            Objective obj;
            obj.kind = (objective == "buchi" || objective == "recurrence") ? ObjectiveKind::recurrence
                                                                           : ObjectiveKind::persistence;
            obj.mode = mode == "almost-sure" ? ObjectiveMode::almost_sure : ObjectiveMode::positive;
            obj.target = parse_targets(target, mdp.states);
            std::cout << "objective: " << describe(obj) << "\n";
            return print_outcome(mdp, mdp_decide(mdp, obj));
        }
        if (simulate->parsed()) {
            const auto pa = load_probabilistic(file);
            const auto est = monte_carlo_estimate(pa, io::parse_lasso(word, pa.alphabet), samples, seed);
            char line[160];
            std::snprintf(line, sizeof line, "estimate: %.6f +/- %.6f (99%% Hoeffding, %llu/%llu accepted)\n",
                          est.estimate, est.half_width, static_cast<unsigned long long>(est.accepted),
                          static_cast<unsigned long long>(est.samples));
            std::cout << line;
            return exit_ok;
        }
        if (gallery_cmd->parsed()) {
            gallery::Spec spec{name, std::nullopt, std::nullopt};
            if (!lambda.empty())
                spec.lambda = parse_lambda(lambda);
            if (gallery_cmd->count("--n"))
                spec.n = n;
            const auto built = gallery::build(spec);
            write_output(output, std::visit([](const auto& a) { return io::serialize(a); }, built));
            return exit_ok;
        }
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
