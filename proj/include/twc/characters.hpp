#ifndef TWC_CHARACTERS_HPP
#define TWC_CHARACTERS_HPP

#include "twc/rat.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twc {

/// Thrown when a theorem hypothesis (a "gate") is violated.
class gate_error : public std::runtime_error {
public:
    gate_error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code))
    {
    }
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Extra invariants carried by a user-declared character generator.
struct GenInfo {
    std::map<std::string, Rat> weights;  // per embedding label; missing = 0
    Rat uval;                            // v_p at the uniformizer
    bool smooth = false;                 // weight-0 tag
};

/// Shape of the base field: ramification index e, inertia degree f, and the
/// labelled embeddings (|embeddings| = e*f), plus declared generators.
struct FieldShape {
    int e = 1;
    int f = 1;
    std::vector<std::string> embeddings;
    std::map<std::string, GenInfo> generators;

    int degree() const { return e * f; }
    bool has_embedding(const std::string& s) const;
    void validate() const;

    friend bool operator==(const FieldShape& a, const FieldShape& b)
    {
        return a.e == b.e && a.f == b.f && a.embeddings == b.embeddings;
    }
};

using FieldShapePtr = std::shared_ptr<const FieldShape>;

FieldShapePtr make_field_shape(FieldShape s);
FieldShapePtr qp_shape();  // e = f = 1, single embedding "s0"

/// A continuous character as a formal element of the free abelian group on
/// generator labels. Builtin generators: "x_<emb>" (weight = indicator of the
/// embedding, uval 1/e), "EPS_SM" (weight 0), "ABS" (weight 0, uval -f).
/// Equality is equality of exponent vectors, never of invariants.
class Character {
public:
    explicit Character(FieldShapePtr shape) : shape_(std::move(shape)) {}

    static Character trivial(FieldShapePtr shape) { return Character(std::move(shape)); }
    static Character generator(FieldShapePtr shape, const std::string& label, long long exp = 1);
    static Character x(FieldShapePtr shape, const std::string& emb, long long exp = 1);
    static Character eps_sm(FieldShapePtr shape, long long exp = 1);
    static Character abs_k(FieldShapePtr shape, long long exp = 1);

    const FieldShapePtr& shape() const { return shape_; }
    const std::map<std::string, long long>& exponents() const { return exps_; }
    long long exponent(const std::string& label) const;
    bool is_trivial() const { return exps_.empty(); }

    Rat weight(const std::string& emb) const;
    Rat uval() const;
    bool is_smooth() const;  // all weights vanish formally

    Character inverse() const;
    Character pow(long long k) const;
    friend Character operator*(const Character& a, const Character& b);
    friend Character operator/(const Character& a, const Character& b);
    friend bool operator==(const Character& a, const Character& b)
    {
        return *a.shape_ == *b.shape_ && a.exps_ == b.exps_;
    }
    friend bool operator!=(const Character& a, const Character& b) { return !(a == b); }

    std::string to_string() const;

private:
    void set_exponent(const std::string& label, long long e);
    void check_label(const std::string& label) const;

    FieldShapePtr shape_;
    std::map<std::string, long long> exps_;
};

/// combine(a, b, +1) = a*b, combine(a, b, -1) = a/b; shapes must agree.
Character combine(const Character& a, const Character& b, int sign);

/// Rank-1 cohomology profile: h1 = [K:Qp] + 1 exactly when h0 or h2 is set.
struct CohProfile {
    int h0 = 0;
    int h1 = 0;
    int h2 = 0;
    std::optional<std::map<std::string, long long>> witness;  // the tuple k, per embedding
};

/// Rank-1 classification: h0 = 1 iff delta = x^{-k} with k in N^Sigma,
/// h2 = 1 iff delta = EPS_SM * x^{k} with k in N^Sigma (as exponent vectors).
CohProfile classify_rank1(const Character& delta);

struct RegularityViolation {
    size_t i = 0;  // 1-based indices of the ratio delta_i / delta_j
    size_t j = 0;
    std::string condition;            // "h0", "h2" or "weight"
    std::optional<std::string> sigma;  // set for weight violations
};

struct RegularityFlags {
    bool in_Treg = true;
    bool in_Twreg = true;
    bool in_Tcirc = true;
    std::vector<RegularityViolation> violations;
};

/// Membership of the tuple in T_reg / T_wreg (via ratio cohomology) and
/// T^n_circ (weight of delta_i/delta_j never a positive integer for i < j).
RegularityFlags tuple_regularity(const std::vector<Character>& deltas);

/// Ordered sigma-weights of the tuple.
std::vector<Rat> weight_map(const std::vector<Character>& deltas, const std::string& sigma);

}  // namespace twc

#endif
