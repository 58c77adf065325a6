#pragma once

#include "pomega/core.hpp"
#include "pomega/decide.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pomega::io {

enum class FileType { pba, pra, psa, nba, nra, nsa, pomdp, mdp };

std::string to_string(FileType type);

using Model = std::variant<ProbabilisticAutomaton, NondeterministicAutomaton, Pomdp>;

struct ParsedFile {
    FileType type;
    Model model;
};

struct Diagnostic {
    std::size_t line = 0;   ///< 1-based; 0 when not tied to a line
    std::size_t column = 0; ///< 1-based; 0 when not tied to a column
    std::string message;

    std::string str() const;
};

class ParseFailure : public Error {
public:
    ParseFailure(std::vector<Diagnostic> diagnostics, bool validation);

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
    /// True when the text is well formed but violates model invariants.
    bool validation() const { return validation_; }

private:
    std::vector<Diagnostic> diagnostics_;
    bool validation_;
};

/// Parses and validates. Throws ParseFailure with every problem found.
ParsedFile parse_automaton(std::string_view text);

/// Canonical text: states in order, edges sorted by (from, letter, to).
std::string serialize(const ProbabilisticAutomaton& automaton);
std::string serialize(const NondeterministicAutomaton& automaton);
std::string serialize(const Pomdp& pomdp);
std::string serialize(const Model& model);

/// `STEM|LOOP`. A part containing whitespace is a list of tokens; otherwise a
/// part equal to a symbol is that symbol, and anything else is split into
/// single characters. Throws Error.
LassoWord parse_lasso(std::string_view text, const Alphabet& alphabet);

/// A finite word in the same part syntax.
Word parse_word(std::string_view text, const Alphabet& alphabet);

/// Inverse of parse_lasso; concatenates when every symbol is one character.
std::string format_lasso(const LassoWord& word, const Alphabet& alphabet);
std::string format_word(const Word& word, const Alphabet& alphabet);

} // namespace pomega::io
