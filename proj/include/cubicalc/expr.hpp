// Arithmetic expressions for metric entries and warping functions: recursive
// descent parser, printer, and evaluation with exact forward-mode first and
// second derivatives (two-direction dual numbers).
#ifndef CUBICALC_EXPR_HPP
#define CUBICALC_EXPR_HPP

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cubicalc::expr {

struct VarRef {
    char family = 'x';  // 'x' or 't'
    int index = 1;      // 1-based
    bool operator==(const VarRef&) const = default;
};

enum class Fn { Sin, Cos, Exp, Log, Sqrt, Tanh };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Call } kind = Num;
    double num = 0.0;
    VarRef var;
    Fn fn = Fn::Sin;
    ExprPtr a, b;
};

ExprPtr make_num(double v);
ExprPtr make_var(char family, int index);
ExprPtr make_bin(Expr::Kind k, ExprPtr a, ExprPtr b);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_call(Fn f, ExprPtr a);

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(size_t off, const std::string& msg)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

ExprPtr parse(std::string_view text);
std::string to_string(const ExprPtr& e);

// Substitutes t_index -> t_index / divisor (used by the rescaling checks).
ExprPtr scale_time_var(const ExprPtr& e, int index, double divisor);
ExprPtr multiply_by(const ExprPtr& e, double factor);

struct Point {
    std::vector<double> x, t;  // values of x1.., t1..

    double get(const VarRef& v) const {
        const std::vector<double>& arr = v.family == 'x' ? x : t;
        if (v.index < 1 || v.index > int(arr.size()))
            throw std::out_of_range(std::string(1, v.family) + std::to_string(v.index) + " unbound");
        return arr[v.index - 1];
    }
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value, two directional first derivatives, and the mixed second derivative.
struct Dual2 {
    double v = 0, da = 0, db = 0, dab = 0;

    Dual2() = default;
    Dual2(double value) : v(value) {}
    static Dual2 seed(double value, double sa, double sb) { return Dual2{value, sa, sb, 0}; }
    Dual2(double v_, double da_, double db_, double dab_) : v(v_), da(da_), db(db_), dab(dab_) {}
};

Dual2 operator+(const Dual2& x, const Dual2& y);
Dual2 operator-(const Dual2& x, const Dual2& y);
Dual2 operator-(const Dual2& x);
Dual2 operator*(const Dual2& x, const Dual2& y);
Dual2 operator/(const Dual2& x, const Dual2& y);
Dual2 sin(const Dual2& x);
Dual2 cos(const Dual2& x);
Dual2 exp(const Dual2& x);
Dual2 log(const Dual2& x);
Dual2 sqrt(const Dual2& x);
Dual2 tanh(const Dual2& x);
Dual2 pow(const Dual2& x, const Dual2& y);
Dual2 abs_smooth(const Dual2& x);  // |x| away from 0; throws at 0
inline Dual2 chain(const Dual2& u, double f, double df, double ddf) {
    return Dual2{f, df * u.da, df * u.db, ddf * u.da * u.db + df * u.dab};
}

double eval(const ExprPtr& e, const Point& p);
// Evaluation with seeds along directions a and b (for d1 pass b unused).
Dual2 eval_dual(const ExprPtr& e, const Point& p, const VarRef& a, const VarRef& b);
double d1(const ExprPtr& e, const VarRef& v, const Point& p);
double d2(const ExprPtr& e, const VarRef& v1, const VarRef& v2, const Point& p);

}  // namespace cubicalc::expr

#endif
