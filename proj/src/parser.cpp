#include "foliation/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>

#include "foliation/errors.hpp"

namespace foliation {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::invalid_argument(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

bool operator==(const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.value == b.value && a.name == b.name && a.exponent == b.exponent &&
           a.children == b.children;
}

namespace {

constexpr std::array<char, 5> kLetters{'x', 'y', 'z', 'u', 't'};

enum class Family { letters, x_indexed, z_indexed };

std::optional<Family> family_of(std::string_view name) {
    if (name.size() == 1 && std::find(kLetters.begin(), kLetters.end(), name[0]) != kLetters.end())
        return Family::letters;
    if (name.size() == 2 && name[1] >= '1' && name[1] <= '9') {
        if (name[0] == 'x') return Family::x_indexed;
        if (name[0] == 'z') return Family::z_indexed;
    }
    return std::nullopt;
}

struct Token {
    enum class Kind { number, ident, op, end } kind = Kind::end;
    std::string text;
    char op = 0;
    std::size_t pos = 0;
};

struct Used {
    std::string name;
    std::size_t pos;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) { advance(); }

    Expr parse_all() {
        Expr e = expr();
        if (tok_.kind != Token::Kind::end) fail("unexpected '" + tok_.text + "'", tok_.pos);
        return e;
    }

    const std::vector<Used>& used() const { return used_; }

    [[noreturn]] void fail(const std::string& msg, std::size_t pos) const {
        auto [line, col] = location(src_, pos);
        throw ParseError(msg, line, col);
    }

    static std::pair<int, int> location(std::string_view src, std::size_t pos) {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos && i < src.size(); ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return {line, col};
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.pos = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::end;
            tok_.text = "end of input";
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
            if (pos_ < src_.size() && src_[pos_] == '.') fail("decimal literals are not supported; use p/q", pos_);
            tok_.kind = Token::Kind::number;
            tok_.text = std::string(src_.substr(b, pos_ - b));
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_.kind = Token::Kind::ident;
            tok_.text = std::string(src_.substr(b, pos_ - b));
            return;
        }
        if (std::string_view("+-*^()").find(c) != std::string_view::npos) {
            ++pos_;
            tok_.kind = Token::Kind::op;
            tok_.op = c;
            tok_.text = std::string(1, c);
            return;
        }
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    bool is_op(char c) const { return tok_.kind == Token::Kind::op && tok_.op == c; }

    void expect(char c) {
        if (!is_op(c)) fail(std::string("expected '") + c + "', found '" + tok_.text + "'", tok_.pos);
        advance();
    }

    Expr expr() {
        std::vector<Expr> terms;
        terms.push_back(term());
        while (is_op('+') || is_op('-')) terms.push_back(term());
        if (terms.size() == 1) return std::move(terms[0]);
        Expr s;
        s.kind = Expr::Kind::sum;
        s.children = std::move(terms);
        return s;
    }

    bool starts_factor() const {
        return tok_.kind == Token::Kind::number || tok_.kind == Token::Kind::ident || is_op('(');
    }

    Expr term() {
        bool neg = false;
        if (is_op('+') || is_op('-')) {
            neg = is_op('-');
            advance();
        }
        std::vector<Expr> factors;
        factors.push_back(factor());
        while (true) {
            if (is_op('*')) {
                advance();
                factors.push_back(factor());
            } else if (starts_factor()) {
                factors.push_back(factor());
            } else {
                break;
            }
        }
        Expr t;
        if (factors.size() == 1) {
            t = std::move(factors[0]);
        } else {
            t.kind = Expr::Kind::product;
            t.children = std::move(factors);
        }
        if (!neg) return t;
        Expr n;
        n.kind = Expr::Kind::negate;
        n.children.push_back(std::move(t));
        return n;
    }

    Expr factor() {
        Expr base = atom();
        if (!is_op('^')) return base;
        advance();
        if (tok_.kind != Token::Kind::number || tok_.text.find('/') != std::string::npos)
            fail("exponent must be a non-negative integer", tok_.pos);
        Expr p;
        p.kind = Expr::Kind::power;
        try {
            p.exponent = std::stoi(tok_.text);
        } catch (const std::out_of_range&) {
            fail("exponent too large", tok_.pos);
        }
        advance();
        p.children.push_back(std::move(base));
        return p;
    }

    Expr atom() {
        if (tok_.kind == Token::Kind::number) {
            Expr e;
            e.kind = Expr::Kind::number;
            try {
                e.value = parse_rational(tok_.text);
            } catch (const std::exception&) {
                fail("invalid number '" + tok_.text + "'", tok_.pos);
            }
            advance();
            return e;
        }
        if (is_op('(')) {
            advance();
            Expr e = expr();
            expect(')');
            return e;
        }
        if (tok_.kind == Token::Kind::ident) {
            const std::string id = tok_.text;
            const std::size_t at = tok_.pos;
            advance();
            if (id == "d") {
                if (!is_op('(')) fail("expected '(' after d", tok_.pos);
                advance();
                Expr e;
                e.kind = Expr::Kind::d;
                e.children.push_back(expr());
                expect(')');
                return e;
            }
            Expr e;
            if (family_of(id)) {
                e.kind = Expr::Kind::variable;
                e.name = id;
            } else if (id.size() > 1 && id[0] == 'd' && family_of(std::string_view(id).substr(1))) {
                e.kind = Expr::Kind::covector;
                e.name = id.substr(1);
            } else {
                fail("unknown variable '" + id + "'", at);
            }
            used_.push_back({e.name, at});
            return e;
        }
        fail("unexpected '" + tok_.text + "'", tok_.pos);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
    std::vector<Used> used_;
};

std::vector<std::string> make_universe(std::string_view src, const std::vector<Used>& used, int min_nvars,
                                       const std::vector<std::string>& explicit_names = {}) {
    if (!explicit_names.empty()) {
        for (const auto& u : used)
            if (std::find(explicit_names.begin(), explicit_names.end(), u.name) == explicit_names.end()) {
                auto [line, col] = Parser::location(src, u.pos);
                throw ParseError("variable '" + u.name + "' is not in the universe", line, col);
            }
        return explicit_names;
    }
    std::optional<Family> fam;
    for (const auto& u : used) {
        Family f = *family_of(u.name);
        if (fam && *fam != f) {
            auto [line, col] = Parser::location(src, u.pos);
            throw ParseError("variable '" + u.name + "' mixes naming families", line, col);
        }
        fam = f;
    }
    std::vector<std::string> names;
    if (!fam || *fam == Family::letters) {
        for (char c : kLetters) {
            std::string s(1, c);
            if (std::any_of(used.begin(), used.end(), [&](const Used& u) { return u.name == s; })) names.push_back(s);
        }
        for (char c : kLetters) {
            if (static_cast<int>(names.size()) >= std::max(1, min_nvars)) break;
            std::string s(1, c);
            if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
        }
        std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
            return std::find(kLetters.begin(), kLetters.end(), a[0]) < std::find(kLetters.begin(), kLetters.end(), b[0]);
        });
        if (min_nvars > static_cast<int>(kLetters.size()))
            throw PreconditionError("letter variables support at most 5 slots");
    } else {
        const char prefix = *fam == Family::x_indexed ? 'x' : 'z';
        int maxi = 0;
        for (const auto& u : used) maxi = std::max(maxi, u.name[1] - '0');
        maxi = std::max(maxi, min_nvars);
        if (maxi > 9) throw PreconditionError("indexed variables support at most 9 slots");
        for (int i = 1; i <= maxi; ++i) names.push_back(std::string(1, prefix) + std::to_string(i));
    }
    return names;
}

struct Value {
    bool is_form = false;
    TruncatedSeries fn{1, 0};
    KForm form{1, 1, 0};
};

class Evaluator {
public:
    Evaluator(const std::vector<std::string>& universe, int order) : universe_(universe), order_(order) {}

    Value eval(const Expr& e) const {
        const int n = static_cast<int>(universe_.size());
        const int M = order_ + 1;
        Value v;
        switch (e.kind) {
            case Expr::Kind::number:
                v.fn = TruncatedSeries::constant(n, M, GaussianRational(e.value));
                return v;
            case Expr::Kind::variable:
                v.fn = TruncatedSeries::variable(n, M, slot(e.name));
                return v;
            case Expr::Kind::covector:
                v.is_form = true;
                v.form = KForm::basis_form({slot(e.name)}, TruncatedSeries::constant(n, M, GaussianRational(1)));
                return v;
            case Expr::Kind::d: {
                Value c = eval(e.children[0]);
                if (c.is_form) throw PreconditionError("d( ) applies to functions only");
                v.is_form = true;
                v.form = exterior_derivative(KForm::function(c.fn));
                return v;
            }
            case Expr::Kind::negate: {
                v = eval(e.children[0]);
                if (v.is_form)
                    v.form = scale(v.form, GaussianRational(-1));
                else
                    v.fn = -v.fn;
                return v;
            }
            case Expr::Kind::sum: {
                v = eval(e.children[0]);
                for (std::size_t i = 1; i < e.children.size(); ++i) {
                    Value w = eval(e.children[i]);
                    if (w.is_form != v.is_form) {
                        if (!w.is_form && w.fn.is_zero()) continue;
                        if (!v.is_form && v.fn.is_zero()) {
                            v = std::move(w);
                            continue;
                        }
                        throw PreconditionError("sum mixes functions and 1-forms");
                    }
                    if (v.is_form)
                        v.form += w.form;
                    else
                        v.fn += w.fn;
                }
                return v;
            }
            case Expr::Kind::product: {
                v = eval(e.children[0]);
                for (std::size_t i = 1; i < e.children.size(); ++i) {
                    Value w = eval(e.children[i]);
                    if (v.is_form && w.is_form) throw PreconditionError("product of two 1-forms");
                    if (v.is_form)
                        v.form = multiply(w.fn, v.form);
                    else if (w.is_form) {
                        v.form = multiply(v.fn, w.form);
                        v.is_form = true;
                    } else {
                        v.fn = v.fn * w.fn;
                    }
                }
                return v;
            }
            case Expr::Kind::power: {
                Value b = eval(e.children[0]);
                if (b.is_form) {
                    if (e.exponent != 1) throw PreconditionError("power of a 1-form");
                    return b;
                }
                b.fn = power(b.fn, e.exponent);
                return b;
            }
        }
        return v;
    }

private:
    int slot(const std::string& name) const {
        auto it = std::find(universe_.begin(), universe_.end(), name);
        return static_cast<int>(it - universe_.begin());
    }
    const std::vector<std::string>& universe_;
    int order_;
};

bool needs_parens_in_product(const Expr& c) {
    return c.kind == Expr::Kind::sum || c.kind == Expr::Kind::negate || c.kind == Expr::Kind::product;
}

std::string operand(const Expr& c) {
    bool paren = c.kind == Expr::Kind::sum || c.kind == Expr::Kind::negate;
    return paren ? "(" + print(c) + ")" : print(c);
}

std::vector<std::string> split_top_level(std::string_view text) {
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t b = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (text[i] == ',' && depth == 0) {
            parts.emplace_back(text.substr(b, i - b));
            b = i + 1;
        }
    }
    parts.emplace_back(text.substr(b));
    return parts;
}

}  // namespace

std::string print(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::number: return to_string(e.value);
        case Expr::Kind::variable: return e.name;
        case Expr::Kind::covector: return "d" + e.name;
        case Expr::Kind::d: return "d(" + print(e.children[0]) + ")";
        case Expr::Kind::negate: return "-" + operand(e.children[0]);
        case Expr::Kind::sum: {
            std::string s;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                const Expr& c = e.children[i];
                if (c.kind == Expr::Kind::negate) {
                    s += (i == 0 ? "-" : " - ") + operand(c.children[0]);
                } else {
                    if (i > 0) s += " + ";
                    s += c.kind == Expr::Kind::sum ? "(" + print(c) + ")" : print(c);
                }
            }
            return s;
        }
        case Expr::Kind::product: {
            std::string s;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i > 0) s += "*";
                const Expr& c = e.children[i];
                s += needs_parens_in_product(c) ? "(" + print(c) + ")" : print(c);
            }
            return s;
        }
        case Expr::Kind::power: {
            const Expr& b = e.children[0];
            bool atomic = b.kind == Expr::Kind::variable || b.kind == Expr::Kind::covector ||
                          b.kind == Expr::Kind::d || (b.kind == Expr::Kind::number && b.value.get_den() == 1);
            return (atomic ? print(b) : "(" + print(b) + ")") + "^" + std::to_string(e.exponent);
        }
    }
    return {};
}

FormExpression parse_expression(std::string_view text, const ParseOptions& options) {
    check_user_order(options.order);
    Parser p(text);
    FormExpression fe;
    fe.source = std::string(text);
    fe.ast = p.parse_all();
    fe.universe = make_universe(text, p.used(), options.min_nvars, options.universe);
    return fe;
}

KForm to_form(const FormExpression& fe, int order) {
    check_user_order(order);
    Evaluator ev(fe.universe, order);
    Value v = ev.eval(fe.ast);
    const int n = static_cast<int>(fe.universe.size());
    if (!v.is_form) {
        if (!v.fn.is_zero()) throw PreconditionError("expression is a function, not a 1-form");
        return KForm(1, n, order, Field::rational);
    }
    return v.form.order() > order ? v.form.truncate(order) : v.form;
}

KForm parse_form(std::string_view text, const ParseOptions& options) {
    return to_form(parse_expression(text, options), options.order);
}

TruncatedSeries parse_function(std::string_view text, const ParseOptions& options) {
    FormExpression fe = parse_expression(text, options);
    Evaluator ev(fe.universe, options.order);
    Value v = ev.eval(fe.ast);
    if (v.is_form) throw PreconditionError("expression is a 1-form, not a function");
    return v.fn.truncate(options.order);
}

std::vector<TruncatedSeries> parse_field(std::string_view text, const ParseOptions& options) {
    check_user_order(options.order);
    auto parts = split_top_level(text);
    std::vector<Expr> asts;
    std::vector<Used> used;
    std::size_t offset = 0;
    for (const auto& part : parts) {
        Parser p(part);
        try {
            asts.push_back(p.parse_all());
        } catch (const ParseError& e) {
            auto [line, col] = Parser::location(text, offset);
            throw ParseError(std::string("in component ") + std::to_string(asts.size() + 1) + ": " + e.what(), line,
                             col);
        }
        for (auto u : p.used()) {
            u.pos += offset;
            used.push_back(u);
        }
        offset += part.size() + 1;
    }
    auto universe =
        make_universe(text, used, std::max(options.min_nvars, static_cast<int>(parts.size())), options.universe);
    if (universe.size() != parts.size())
        throw PreconditionError("field has " + std::to_string(parts.size()) + " components over " +
                                std::to_string(universe.size()) + " variables");
    Evaluator ev(universe, options.order);
    std::vector<TruncatedSeries> out;
    for (const auto& a : asts) {
        Value v = ev.eval(a);
        if (v.is_form) throw PreconditionError("field components must be functions");
        out.push_back(v.fn.truncate(options.order));
    }
    return out;
}

std::vector<std::string> variable_names(int nvars, bool indexed) {
    std::vector<std::string> names;
    if (!indexed && nvars <= static_cast<int>(kLetters.size())) {
        for (int i = 0; i < nvars; ++i) names.emplace_back(1, kLetters[static_cast<std::size_t>(i)]);
        return names;
    }
    for (int i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

}  // namespace foliation
