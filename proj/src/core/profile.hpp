#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace ck {

// Small expression language over the radial variable k.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' atom)?
//   atom   := number | 'k' | ident '(' args ')' | '(' expr ')' | '-' atom
//
// Functions: exp, sinh. Presets: constant(c), power(a,p), gauss_bump(a,k0,w).

struct ProfileSyntaxError : ConfigError {
    ProfileSyntaxError(const std::string& msg, std::size_t offset,
                       std::vector<std::string> expected);
    std::size_t offset;
    std::vector<std::string> expected;
};

struct ProfileExpr;
using ProfileNode = std::shared_ptr<const ProfileExpr>;

struct ProfileExpr {
    enum class Kind { Number, Var, Unary, Binary, Call };
    Kind kind = Kind::Number;
    double value = 0.0;      // Number
    char op = 0;             // Binary: + - * / ^ ; Unary: -
    std::string name;        // Call
    std::vector<ProfileNode> args;

    double eval(double k) const;
    std::string print() const;
    bool equals(const ProfileExpr& other) const;
};

ProfileNode parse_profile(const std::string& text);

} // namespace ck
