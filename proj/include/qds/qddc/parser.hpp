#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qds/qddc/formula.hpp"
#include "qds/qddc/registry.hpp"

namespace qds {

struct Token {
    enum class Kind {
        Ident, Int,
        LParen, RParen, LBrack, RBrack, LBrace, RBrace,
        Comma, Semi, Dot, Colon, Plus, Minus,
        Not, And, Or, Implies, Iff, Chop,
        Lt, Le, Eq, Ge, Gt, Diamond,
        Hash, String,
        End,
    };
    Kind kind;
    std::string text;
    long value = 0;
    int line = 1;
    int column = 1;
};

// Splits text into tokens. Brackets and braces are always single-character
// tokens; the parser pairs them up for [[..]], {{..}} and []. Comments
// (// and /* */) are skipped. The last token is always End.
std::vector<Token> tokenize(std::string_view text, int first_line = 1);

struct Macro {
    std::vector<std::string> params;
    std::vector<Token> body;  // without trailing End
};

// Named constants and formula macros visible to the parser.
struct Definitions {
    std::map<std::string, long> constants;
    std::map<std::string, Macro> macros;
};

FormulaPtr parse_formula(std::string_view text, const VarRegistry& reg);
FormulaPtr parse_formula(std::string_view text, const VarRegistry& reg, const Definitions& defs);
FormulaPtr parse_formula(const std::vector<Token>& tokens, const VarRegistry& reg, const Definitions& defs);

PropPtr parse_prop(std::string_view text, const VarRegistry& reg);
PropPtr parse_prop(const std::vector<Token>& tokens, const VarRegistry& reg, const Definitions& defs);

// Evaluates a constant expression such as "n-1" over the given constants.
long parse_constant_expr(const std::vector<Token>& tokens, const Definitions& defs);

}  // namespace qds
