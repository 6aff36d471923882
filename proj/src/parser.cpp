#include "gtau/error.hpp"
#include "gtau/net.hpp"

#include <cctype>
#include <charconv>

namespace gtau {

namespace {

class Parser {
public:
    Parser(std::string_view s, const ParseContext& ctx) : s_(s), ctx_(ctx) {}

    NetExpr run() {
        NetExpr e = net();
        skip();
        if (p_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    std::string_view s_;
    const ParseContext& ctx_;
    std::size_t p_ = 0;

    [[noreturn]] void fail(const std::string& m) const { throw ParseError(p_, m); }

    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }

    bool peek(char c) {
        skip();
        return p_ < s_.size() && s_[p_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++p_;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++p_;
        return true;
    }

    std::string ident() {
        skip();
        std::size_t b = p_;
        while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
        if (b == p_ || std::isdigit(static_cast<unsigned char>(s_[b]))) {
            p_ = b;
            fail("expected a name");
        }
        return std::string(s_.substr(b, p_ - b));
    }

    double number() {
        skip();
        std::size_t b = p_;
        if (p_ < s_.size() && s_[p_] == '+') ++p_;
        double v;
        auto r = std::from_chars(s_.data() + p_, s_.data() + s_.size(), v);
        if (r.ec != std::errc()) {
            p_ = b;
            fail("expected a number");
        }
        p_ = std::size_t(r.ptr - s_.data());
        return v;
    }

    int integer() {
        std::size_t b = p_;
        double v = number();
        if (v != double(int(v))) {
            p_ = b;
            fail("expected an integer");
        }
        return int(v);
    }

    std::vector<double> numbers() {
        std::vector<double> v;
        if (!accept('(')) return v;
        v.push_back(number());
        while (accept(',')) v.push_back(number());
        expect(')');
        return v;
    }

    const std::shared_ptr<const Mollifier>& rho() {
        if (!ctx_.rho) fail("no mollifier configured");
        return ctx_.rho;
    }

    template <class F>
    auto guarded(std::size_t at, F&& f) {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(at, e.what());
        }
    }

    SmoothFn fn_named(const std::string& name, std::size_t at) {
        auto args = numbers();
        auto arity = [&](std::size_t lo, std::size_t hi) {
            if (args.size() < lo || args.size() > hi) throw ParseError(at, "wrong number of arguments to " + name);
        };
        return guarded(at, [&] {
            if (name == "poly") {
                arity(1, 64);
                return SmoothFn::polynomial(args);
            }
            if (name == "sin" || name == "cos") {
                arity(0, 2);
                double w = args.size() > 0 ? args[0] : 1.0, p = args.size() > 1 ? args[1] : 0.0;
                return name == "sin" ? SmoothFn::sine(w, p) : SmoothFn::cosine(w, p);
            }
            if (name == "osc") {
                arity(1, 1);
                return SmoothFn::sine(1.0, args[0]);
            }
            if (name == "gauss") {
                arity(0, 1);
                return SmoothFn::gaussian(args.empty() ? 1.0 : args[0]);
            }
            if (name == "bump") {
                if (args.size() == 1) throw ParseError(at, "bump takes (center, radius)");
                arity(0, 2);
                return args.empty() ? SmoothFn::bump() : SmoothFn::bump(args[0], args[1]);
            }
            arity(0, 0);
            return smooth_catalog(name);
        });
    }

    SmoothFn function() {
        skip();
        std::size_t at = p_;
        return fn_named(ident(), at);
    }

    DistributionDesc distribution() {
        skip();
        std::size_t at = p_;
        std::string name = ident();
        if (name == "delta") {
            DeltaDerivative d;
            if (accept('(')) {
                d.k = integer();
                if (accept(',')) d.center = number();
                expect(')');
            }
            return d;
        }
        if (name == "heaviside") {
            auto a = numbers();
            if (a.size() > 1) throw ParseError(at, "heaviside takes one center");
            return Heaviside{a.empty() ? 0.0 : a[0]};
        }
        SmoothFn f = fn_named(name, at);
        if (f.kind == SmoothKind::polynomial) return PolynomialDist{f.poly};
        return SmoothOM{f};
    }

    GeneralizedConstant factor() {
        skip();
        std::size_t at = p_;
        if (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '-' || s_[p_] == '+' ||
                               s_[p_] == '.'))
            return {number()};
        std::string name = ident();
        GeneralizedConstant c;
        if (name == "eps") {
            c.eps_power = 1.0;
            return c;
        }
        expect('(');
        double v = number();
        expect(')');
        if (name == "pow") c.eps_power = v;
        else if (name == "exp") c.inv_eps = v;
        else if (name == "logpow") c.log_power = v;
        else throw ParseError(at, "unknown scalar factor '" + name + "'");
        return c;
    }

    GeneralizedConstant scalar() {
        GeneralizedConstant c = factor();
        while (accept('*')) c = c * factor();
        return c;
    }

    DriftLaw law() {
        skip();
        if (p_ < s_.size() && !std::isalpha(static_cast<unsigned char>(s_[p_]))) return {DriftLaw::constant, number()};
        std::size_t at = p_;
        std::string name = ident();
        if (name == "sqrtlog") return {DriftLaw::sqrtlog, 0.0};
        if (name == "const") {
            expect('(');
            double c = number();
            expect(')');
            return {DriftLaw::constant, c};
        }
        throw ParseError(at, "unknown drift law '" + name + "'");
    }

    NetExpr net() {
        skip();
        std::size_t at = p_;
        std::string name = ident();
        auto unary = [&](auto&& build) {
            expect('(');
            NetExpr a = net();
            expect(')');
            return guarded(at, [&] { return build(a); });
        };
        auto binary = [&](auto&& build) {
            expect('(');
            NetExpr a = net();
            expect(',');
            NetExpr b = net();
            expect(')');
            return guarded(at, [&] { return build(a, b); });
        };
        if (name == "embed") {
            expect('(');
            SmoothFn f = function();
            expect(')');
            return embed(f);
        }
        if (name == "mollify" || name == "iota") {
            expect('(');
            DistributionDesc d = distribution();
            expect(')');
            return guarded(at, [&] { return mollified(d, rho()); });
        }
        if (name == "defect") {
            expect('(');
            SmoothFn f = function();
            expect(')');
            return guarded(at, [&] { return defect(f, rho()); });
        }
        if (name == "add") return binary([](NetExpr a, NetExpr b) { return add(a, b); });
        if (name == "sub") return binary([](NetExpr a, NetExpr b) { return sub(a, b); });
        if (name == "mul") return binary([](NetExpr a, NetExpr b) { return mul(a, b); });
        if (name == "fourier") return unary([](NetExpr a) { return fourier_node(a); });
        if (name == "ifourier") return unary([](NetExpr a) { return inv_fourier_node(a); });
        if (name == "scale") {
            expect('(');
            GeneralizedConstant c = scalar();
            expect(',');
            NetExpr a = net();
            expect(')');
            return scale(c, a);
        }
        if (name == "derive") {
            expect('(');
            int k = integer();
            expect(',');
            NetExpr a = net();
            expect(')');
            return guarded(at, [&] { return derive(k, a); });
        }
        if (name == "drift") {
            expect('(');
            NetExpr a = net();
            expect(',');
            DriftLaw l = law();
            expect(')');
            return guarded(at, [&] { return drift(a, l); });
        }
        if (name == "restrict") {
            expect('(');
            NetExpr a = net();
            expect(',');
            double lo = number();
            expect(',');
            double hi = number();
            expect(')');
            return guarded(at, [&] { return restrict(a, lo, hi); });
        }
        return embed(fn_named(name, at));
    }
};

} // namespace

NetExpr parse_net(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).run(); }

} // namespace gtau
