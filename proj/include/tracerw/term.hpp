#ifndef TRACERW_TERM_HPP
#define TRACERW_TERM_HPP

#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cospan.hpp"

namespace tracerw {

enum class Kind { Generator, Identity, Symmetry, Compose, Tensor, Trace, Copy, Discard };

struct Node;
using Term = std::shared_ptr<const Node>;

/** Term node; dom and cod are computed when the node is built. */
struct Node {
    Kind kind;
    std::string name; // Generator
    std::size_t a = 0; // Identity width, Symmetry m, Trace width
    std::size_t b = 0; // Symmetry n
    Term left;
    Term right; // Trace body is `left`
    std::size_t dom = 0;
    std::size_t cod = 0;
};

using TypedTerm = Term;

class TypeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace term {

inline Term make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline Term gen(const std::string& name, std::size_t in, std::size_t out) {
    return make(Node{Kind::Generator, name, 0, 0, nullptr, nullptr, in, out});
}
inline Term id(std::size_t n) { return make(Node{Kind::Identity, "", n, 0, nullptr, nullptr, n, n}); }
inline Term swap(std::size_t m, std::size_t n) {
    return make(Node{Kind::Symmetry, "", m, n, nullptr, nullptr, m + n, m + n});
}
inline Term copy() { return make(Node{Kind::Copy, "", 0, 0, nullptr, nullptr, 1, 2}); }
inline Term discard() { return make(Node{Kind::Discard, "", 0, 0, nullptr, nullptr, 1, 0}); }

inline Term seq(Term x, Term y) {
    if (x->cod != y->dom)
        throw TypeError("cannot compose " + std::to_string(x->dom) + "->" + std::to_string(x->cod) + " with " +
                        std::to_string(y->dom) + "->" + std::to_string(y->cod));
    std::size_t d = x->dom, c = y->cod;
    return make(Node{Kind::Compose, "", 0, 0, std::move(x), std::move(y), d, c});
}
inline Term par(Term x, Term y) {
    std::size_t d = x->dom + y->dom, c = x->cod + y->cod;
    return make(Node{Kind::Tensor, "", 0, 0, std::move(x), std::move(y), d, c});
}
inline Term tr(std::size_t x, Term body) {
    if (body->dom < x || body->cod < x)
        throw TypeError("trace width " + std::to_string(x) + " exceeds interface of " + std::to_string(body->dom) +
                        "->" + std::to_string(body->cod));
    std::size_t d = body->dom - x, c = body->cod - x;
    return make(Node{Kind::Trace, "", x, 0, std::move(body), nullptr, d, c});
}

// Tensor and compose helpers that skip empty identities.
inline Term par_all(const std::vector<Term>& ts) {
    Term r;
    for (const Term& t : ts) {
        if (t->kind == Kind::Identity && t->a == 0) continue;
        r = r ? par(r, t) : t;
    }
    return r ? r : id(0);
}
inline Term seq_all(const std::vector<Term>& ts, std::size_t width) {
    Term r;
    for (const Term& t : ts) r = r ? seq(r, t) : t;
    return r ? r : id(width);
}

// Wire at position k moves to position dest[k]. Built from layers of
// adjacent swaps (odd-even transposition sort).
inline Term permutation(std::vector<std::size_t> dest) {
    const std::size_t n = dest.size();
    std::vector<Term> layers;
    bool sorted = false;
    for (std::size_t round = 0; !sorted; ++round) {
        sorted = true;
        for (std::size_t pass = 0; pass < 2; ++pass) {
            std::vector<Term> parts;
            bool any = false;
            std::size_t k = 0;
            std::size_t ids = 0;
            auto flush = [&] {
                if (ids) parts.push_back(id(ids));
                ids = 0;
            };
            for (; k < n;) {
                if (k % 2 == pass && k + 1 < n && dest[k] > dest[k + 1]) {
                    flush();
                    parts.push_back(swap(1, 1));
                    std::swap(dest[k], dest[k + 1]);
                    any = true;
                    k += 2;
                } else {
                    ++ids;
                    ++k;
                }
            }
            flush();
            if (any) {
                layers.push_back(par_all(parts));
                sorted = false;
            }
        }
        (void)round;
    }
    return seq_all(layers, n);
}

// 1 -> k fan-out from the binary copy
inline Term spider(std::size_t k) {
    if (k == 0) return discard();
    if (k == 1) return id(1);
    Term t = copy();
    for (std::size_t w = 2; w < k; ++w) t = seq(t, par(copy(), id(w - 1)));
    return t;
}

// n -> 2n copy of a bundle and n -> 0 discard, from the 1-bit generators
inline Term copy_n(std::size_t n) {
    if (n == 0) return id(0);
    std::vector<Term> cs(n, copy());
    std::vector<std::size_t> dest(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        dest[2 * k] = k;
        dest[2 * k + 1] = n + k;
    }
    return seq(par_all(cs), permutation(dest));
}
inline Term discard_n(std::size_t n) {
    std::vector<Term> ds(n, discard());
    return par_all(ds);
}

} // namespace term

inline bool uses_comonoid(const Term& t) {
    switch (t->kind) {
    case Kind::Copy:
    case Kind::Discard: return true;
    case Kind::Compose:
    case Kind::Tensor: return uses_comonoid(t->left) || uses_comonoid(t->right);
    case Kind::Trace: return uses_comonoid(t->left);
    default: return false;
    }
}

inline std::size_t term_size(const Term& t) {
    switch (t->kind) {
    case Kind::Compose:
    case Kind::Tensor: return 1 + term_size(t->left) + term_size(t->right);
    case Kind::Trace: return 1 + term_size(t->left);
    default: return 1;
    }
}

inline std::string to_string(const Term& t) {
    switch (t->kind) {
    case Kind::Generator: return t->name;
    case Kind::Identity: return "id:" + std::to_string(t->a);
    case Kind::Symmetry: return "swap:" + std::to_string(t->a) + "," + std::to_string(t->b);
    case Kind::Copy: return "copy";
    case Kind::Discard: return "discard";
    case Kind::Trace: return "tr^" + std::to_string(t->a) + "(" + to_string(t->left) + ")";
    case Kind::Compose: return to_string(t->left) + " ; " + to_string(t->right);
    case Kind::Tensor: {
        auto wrap = [](const Term& s) {
            return s->kind == Kind::Compose ? "(" + to_string(s) + ")" : to_string(s);
        };
        return wrap(t->left) + " * " + wrap(t->right);
    }
    }
    return {};
}

inline Cospan interpret(const Term& t) {
    switch (t->kind) {
    case Kind::Generator: return generator(t->name, t->dom, t->cod);
    case Kind::Identity: return identity(t->a);
    case Kind::Symmetry: return symmetry(t->a, t->b);
    case Kind::Copy: return copy(1);
    case Kind::Discard: return discard(1);
    case Kind::Compose: return compose(interpret(t->left), interpret(t->right));
    case Kind::Tensor: return tensor(interpret(t->left), interpret(t->right));
    case Kind::Trace: return trace(t->a, interpret(t->left));
    }
    throw std::logic_error("interpret: bad node");
}

// m -> n  becomes  0 -> m+n
inline Cospan fold(const Cospan& c) {
    Cospan r;
    r.graph = c.graph;
    r.output = c.input;
    r.output.insert(r.output.end(), c.output.begin(), c.output.end());
    return r;
}

inline Cospan unfold(const Cospan& c, std::size_t m) {
    if (!c.input.empty()) throw std::invalid_argument("unfold: input interface must be empty");
    if (c.output.size() < m) throw std::invalid_argument("unfold: split point beyond interface");
    Cospan r;
    r.graph = c.graph;
    r.input.assign(c.output.begin(), c.output.begin() + static_cast<std::ptrdiff_t>(m));
    r.output.assign(c.output.begin() + static_cast<std::ptrdiff_t>(m), c.output.end());
    return r;
}

class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t line, std::size_t col, const std::string& msg)
        : std::invalid_argument(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line),
          col_(col) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

private:
    std::size_t line_;
    std::size_t col_;
};

// Extra atoms (e.g. circuit values). Returns nullopt for words it does not know.
using AtomHook = std::function<std::optional<Term>(const std::string&)>;

namespace detail {

struct Token {
    enum Type { Word, Semi, Star, LParen, RParen, End } type;
    std::string text;
    std::size_t line, col;
};

inline bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == ',' || c == '^' ||
           c == '.' || c == '\'' || c == '-' || c == '|';
}

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < src.size();) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        Token t{Token::End, std::string(1, c), line, col};
        switch (c) {
        case ';': t.type = Token::Semi; break;
        case '*': t.type = Token::Star; break;
        case '(': t.type = Token::LParen; break;
        case ')': t.type = Token::RParen; break;
        default:
            if (!word_char(c)) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
            t.type = Token::Word;
            t.text.clear();
            while (i < src.size() && word_char(src[i])) {
                // "tr^1(" : stop the word before the paren
                t.text.push_back(src[i]);
                ++i;
                ++col;
            }
            out.push_back(t);
            continue;
        }
        out.push_back(t);
        ++i;
        ++col;
    }
    out.push_back(Token{Token::End, "", line, col});
    return out;
}

inline std::optional<std::size_t> parse_nat(const std::string& s) {
    if (s.empty() || s.size() > 9) return std::nullopt;
    std::size_t n = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
}

class Parser {
public:
    Parser(const std::string& src, const Signature& sig, const AtomHook& hook)
        : toks_(tokenize(src)), sig_(sig), hook_(hook) {}

    Term parse() {
        Term t = seq();
        if (peek().type != Token::End) fail(peek(), "unexpected '" + peek().text + "'");
        return t;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }
    [[noreturn]] void type_fail(const Token& t, const std::string& msg) const {
        throw TypeError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
    }

    Term seq() {
        Term t = par();
        while (peek().type == Token::Semi) {
            const Token& op = next();
            Term r = par();
            try {
                t = term::seq(t, r);
            } catch (const TypeError& e) {
                type_fail(op, e.what());
            }
        }
        return t;
    }
    Term par() {
        Term t = atom();
        while (peek().type == Token::Star) {
            next();
            t = term::par(t, atom());
        }
        return t;
    }
    Term atom() {
        const Token& t = next();
        if (t.type == Token::LParen) {
            Term inner = seq();
            if (next().type != Token::RParen) fail(toks_[pos_ - 1], "expected ')'");
            return inner;
        }
        if (t.type != Token::Word) fail(t, t.type == Token::End ? "unexpected end of input" : "expected a term");
        const std::string& w = t.text;
        if (w.rfind("tr^", 0) == 0) {
            auto x = parse_nat(w.substr(3));
            if (!x) fail(t, "trace width must be a natural number");
            if (next().type != Token::LParen) fail(toks_[pos_ - 1], "expected '(' after " + w);
            Term body = seq();
            if (next().type != Token::RParen) fail(toks_[pos_ - 1], "expected ')'");
            try {
                return term::tr(*x, body);
            } catch (const TypeError& e) {
                type_fail(t, e.what());
            }
        }
        if (w.rfind("id:", 0) == 0) {
            auto n = parse_nat(w.substr(3));
            if (!n) fail(t, "bad identity width in '" + w + "'");
            return term::id(*n);
        }
        if (w.rfind("swap:", 0) == 0) {
            auto rest = w.substr(5);
            auto comma = rest.find(',');
            std::optional<std::size_t> m, n;
            if (comma != std::string::npos) {
                m = parse_nat(rest.substr(0, comma));
                n = parse_nat(rest.substr(comma + 1));
            }
            if (!m || !n) fail(t, "expected swap:<nat>,<nat>");
            return term::swap(*m, *n);
        }
        if (w == "copy") return term::copy();
        if (w == "discard") return term::discard();
        if (w.rfind("copy:", 0) == 0 || w.rfind("discard:", 0) == 0) {
            bool is_copy = w[0] == 'c';
            auto n = parse_nat(w.substr(w.find(':') + 1));
            if (!n) fail(t, "bad width in '" + w + "'");
            return is_copy ? term::copy_n(*n) : term::discard_n(*n);
        }
        if (hook_) {
            if (auto r = hook_(w)) return *r;
        }
        if (!sig_.contains(w)) fail(t, "unknown generator '" + w + "'");
        const Arity& a = sig_.at(w);
        return term::gen(w, a.in, a.out);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Signature& sig_;
    const AtomHook& hook_;
};

} // namespace detail

inline Term parse(const std::string& source, const Signature& sig, const AtomHook& hook = {}) {
    return detail::Parser(source, sig, hook).parse();
}

// Lines of the form "gen <name> : <nat> -> <nat>"; '#' starts a comment.
inline Signature parse_signature(const std::string& text) {
    Signature sig;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kw, name, colon, arrow;
        if (!(ls >> kw)) continue;
        std::string a, b;
        if (kw != "gen" || !(ls >> name >> colon >> a >> arrow >> b) || colon != ":" || arrow != "->")
            throw ParseError(no, 1, "expected 'gen <name> : <nat> -> <nat>'");
        std::string extra;
        if (ls >> extra) throw ParseError(no, 1, "trailing text '" + extra + "'");
        auto x = detail::parse_nat(a), y = detail::parse_nat(b);
        if (!x || !y) throw ParseError(no, 1, "arity and coarity must be natural numbers");
        try {
            sig.add(name, *x, *y);
        } catch (const std::invalid_argument& e) {
            throw ParseError(no, 1, e.what());
        }
    }
    return sig;
}

} // namespace tracerw

#endif
