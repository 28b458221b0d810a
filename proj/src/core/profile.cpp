#include "core/profile.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ck {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i];
    }
    return s;
}

// name -> arity
const std::map<std::string, int>& callables()
{
    static const std::map<std::string, int> t = {
        {"exp", 1}, {"sinh", 1}, {"constant", 1}, {"power", 2}, {"gauss_bump", 3}};
    return t;
}

struct Token {
    enum class Type { Number, Ident, Var, Op, LParen, RParen, Comma, End };
    Type type;
    std::size_t offset;
    double number = 0.0;
    char op = 0;
    std::string ident;
};

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    explicit Lexer(const std::string& t) : text(t) {}

    Token next()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        Token tok;
        tok.offset = pos;
        if (pos >= text.size()) {
            tok.type = Token::Type::End;
            return tok;
        }
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
            std::size_t end = pos;
            while (end < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.'))
                ++end;
            if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
                std::size_t e = end + 1;
                if (e < text.size() && (text[e] == '+' || text[e] == '-')) ++e;
                if (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) {
                    ++e;
                    while (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) ++e;
                    end = e;
                }
            }
            tok.type = Token::Type::Number;
            tok.number = std::strtod(text.substr(pos, end - pos).c_str(), nullptr);
            pos = end;
            return tok;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos;
            while (end < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
                ++end;
            std::string name = text.substr(pos, end - pos);
            pos = end;
            if (name == "k") {
                tok.type = Token::Type::Var;
            } else {
                tok.type = Token::Type::Ident;
                tok.ident = name;
            }
            return tok;
        }
        switch (c) {
        case '+': case '-': case '*': case '/': case '^':
            tok.type = Token::Type::Op;
            tok.op = c;
            ++pos;
            return tok;
        case '(':
            tok.type = Token::Type::LParen;
            ++pos;
            return tok;
        case ')':
            tok.type = Token::Type::RParen;
            ++pos;
            return tok;
        case ',':
            tok.type = Token::Type::Comma;
            ++pos;
            return tok;
        default:
            throw ProfileSyntaxError("unexpected character", pos,
                                     {"number", "k", "identifier", "(", "-"});
        }
    }
};

struct Parser {
    std::vector<Token> toks;
    std::size_t idx = 0;

    explicit Parser(const std::string& text)
    {
        Lexer lx(text);
        for (;;) {
            Token t = lx.next();
            toks.push_back(t);
            if (t.type == Token::Type::End) break;
        }
    }

    const Token& peek() const { return toks[idx]; }
    Token take() { return toks[idx++]; }

    [[noreturn]] void fail(std::vector<std::string> expected)
    {
        const Token& t = peek();
        std::ostringstream os;
        os << "syntax error at offset " << t.offset << ": expected " << join(expected);
        throw ProfileSyntaxError(os.str(), t.offset, std::move(expected));
    }

    ProfileNode expr()
    {
        ProfileNode lhs = term();
        while (peek().type == Token::Type::Op && (peek().op == '+' || peek().op == '-')) {
            const char op = take().op;
            ProfileNode rhs = term();
            auto n = std::make_shared<ProfileExpr>();
            n->kind = ProfileExpr::Kind::Binary;
            n->op = op;
            n->args = {lhs, rhs};
            lhs = n;
        }
        return lhs;
    }

    ProfileNode term()
    {
        ProfileNode lhs = factor();
        while (peek().type == Token::Type::Op && (peek().op == '*' || peek().op == '/')) {
            const char op = take().op;
            ProfileNode rhs = factor();
            auto n = std::make_shared<ProfileExpr>();
            n->kind = ProfileExpr::Kind::Binary;
            n->op = op;
            n->args = {lhs, rhs};
            lhs = n;
        }
        return lhs;
    }

    ProfileNode factor()
    {
        ProfileNode base = atom();
        if (peek().type == Token::Type::Op && peek().op == '^') {
            take();
            ProfileNode expo = atom();
            auto n = std::make_shared<ProfileExpr>();
            n->kind = ProfileExpr::Kind::Binary;
            n->op = '^';
            n->args = {base, expo};
            return n;
        }
        return base;
    }

    ProfileNode atom()
    {
        const Token& t = peek();
        switch (t.type) {
        case Token::Type::Number: {
            auto n = std::make_shared<ProfileExpr>();
            n->kind = ProfileExpr::Kind::Number;
            n->value = take().number;
            return n;
        }
        case Token::Type::Var: {
            take();
            auto n = std::make_shared<ProfileExpr>();
            n->kind = ProfileExpr::Kind::Var;
            return n;
        }
        case Token::Type::Op:
            if (t.op == '-') {
                take();
                ProfileNode inner = atom();
                auto n = std::make_shared<ProfileExpr>();
                n->kind = ProfileExpr::Kind::Unary;
                n->op = '-';
                n->args = {inner};
                return n;
            }
            fail({"number", "k", "identifier", "(", "-"});
        case Token::Type::LParen: {
            take();
            ProfileNode inner = expr();
            if (peek().type != Token::Type::RParen) fail({")"});
            take();
            return inner;
        }
        case Token::Type::Ident: {
            Token name = take();
            auto it = callables().find(name.ident);
            if (it == callables().end()) {
                std::ostringstream os;
                os << "unknown identifier '" << name.ident << "' at offset " << name.offset;
                throw ProfileSyntaxError(os.str(), name.offset, {"exp", "sinh", "constant",
                                                                 "power", "gauss_bump"});
            }
            if (peek().type != Token::Type::LParen) fail({"("});
            take();
            auto n = std::make_shared<ProfileExpr>();
            n->kind = ProfileExpr::Kind::Call;
            n->name = name.ident;
            for (;;) {
                n->args.push_back(expr());
                if (peek().type == Token::Type::Comma) {
                    take();
                    continue;
                }
                if (peek().type == Token::Type::RParen) {
                    take();
                    break;
                }
                fail({",", ")"});
            }
            if (static_cast<int>(n->args.size()) != it->second) {
                std::ostringstream os;
                os << name.ident << " takes " << it->second << " argument(s), got "
                   << n->args.size() << " (offset " << name.offset << ")";
                throw ProfileSyntaxError(os.str(), name.offset, {});
            }
            return n;
        }
        default:
            fail({"number", "k", "identifier", "(", "-"});
        }
    }
};

int precedence(char op)
{
    switch (op) {
    case '+': case '-': return 1;
    case '*': case '/': return 2;
    case '^': return 3;
    default: return 4;
    }
}

bool is_atom(const ProfileExpr& e)
{
    return e.kind == ProfileExpr::Kind::Number || e.kind == ProfileExpr::Kind::Var ||
           e.kind == ProfileExpr::Kind::Call || e.kind == ProfileExpr::Kind::Unary;
}

void print_rec(const ProfileExpr& e, std::string& out, int parent_prec, bool rhs)
{
    switch (e.kind) {
    case ProfileExpr::Kind::Number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        out += buf;
        return;
    }
    case ProfileExpr::Kind::Var:
        out += 'k';
        return;
    case ProfileExpr::Kind::Unary: {
        out += '-';
        const ProfileExpr& a = *e.args[0];
        if (is_atom(a)) {
            print_rec(a, out, 4, false);
        } else {
            out += '(';
            print_rec(a, out, 0, false);
            out += ')';
        }
        return;
    }
    case ProfileExpr::Kind::Call: {
        out += e.name;
        out += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += ", ";
            print_rec(*e.args[i], out, 0, false);
        }
        out += ')';
        return;
    }
    case ProfileExpr::Kind::Binary: {
        const int p = precedence(e.op);
        bool need = false;
        if (e.op == '^') {
            // operands of ^ must be atoms
            need = true; // handled per operand below
            std::string l, r;
            if (is_atom(*e.args[0])) {
                print_rec(*e.args[0], l, 4, false);
            } else {
                l += '(';
                print_rec(*e.args[0], l, 0, false);
                l += ')';
            }
            if (is_atom(*e.args[1])) {
                print_rec(*e.args[1], r, 4, false);
            } else {
                r += '(';
                print_rec(*e.args[1], r, 0, false);
                r += ')';
            }
            // a ^-expression is itself a factor; parenthesize when a parent
            // of equal/higher precedence would re-associate it
            const bool wrap = parent_prec > 3 || (parent_prec == 3);
            if (wrap) out += '(';
            out += l;
            out += '^';
            out += r;
            if (wrap) out += ')';
            (void)need;
            return;
        }
        need = p < parent_prec || (p == parent_prec && rhs);
        if (need) out += '(';
        print_rec(*e.args[0], out, p, false);
        out += ' ';
        out += e.op;
        out += ' ';
        print_rec(*e.args[1], out, p, true);
        if (need) out += ')';
        return;
    }
    }
}

} // namespace

ProfileSyntaxError::ProfileSyntaxError(const std::string& msg, std::size_t off,
                                       std::vector<std::string> exp)
    : ConfigError(msg), offset(off), expected(std::move(exp))
{
}

double ProfileExpr::eval(double k) const
{
    switch (kind) {
    case Kind::Number: return value;
    case Kind::Var: return k;
    case Kind::Unary: return -args[0]->eval(k);
    case Kind::Binary: {
        const double a = args[0]->eval(k);
        const double b = args[1]->eval(k);
        switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
        }
        return 0.0;
    }
    case Kind::Call: {
        if (name == "exp") return std::exp(args[0]->eval(k));
        if (name == "sinh") return std::sinh(args[0]->eval(k));
        if (name == "constant") return args[0]->eval(k);
        if (name == "power") return args[0]->eval(k) * std::pow(k, args[1]->eval(k));
        if (name == "gauss_bump") {
            const double a = args[0]->eval(k);
            const double k0 = args[1]->eval(k);
            const double wdt = args[2]->eval(k);
            const double z = (k - k0) / wdt;
            return a * std::exp(-z * z);
        }
        return 0.0;
    }
    }
    return 0.0;
}

std::string ProfileExpr::print() const
{
    std::string out;
    print_rec(*this, out, 0, false);
    return out;
}

bool ProfileExpr::equals(const ProfileExpr& o) const
{
    if (kind != o.kind) return false;
    switch (kind) {
    case Kind::Number: return value == o.value;
    case Kind::Var: return true;
    case Kind::Unary: return o.op == op && args[0]->equals(*o.args[0]);
    case Kind::Binary:
        return op == o.op && args[0]->equals(*o.args[0]) && args[1]->equals(*o.args[1]);
    case Kind::Call: {
        if (name != o.name || args.size() != o.args.size()) return false;
        for (std::size_t i = 0; i < args.size(); ++i)
            if (!args[i]->equals(*o.args[i])) return false;
        return true;
    }
    }
    return false;
}

ProfileNode parse_profile(const std::string& text)
{
    Parser p(text);
    ProfileNode e = p.expr();
    if (p.peek().type != Token::Type::End) p.fail({"end of input", "+", "-", "*", "/"});
    return e;
}

} // namespace ck
