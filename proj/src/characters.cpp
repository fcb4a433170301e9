#include "twc/characters.hpp"

#include <algorithm>

namespace twc {

namespace {

const std::string kEpsSm = "EPS_SM";
const std::string kAbs = "ABS";
const std::string kXPrefix = "x_";

bool is_x_label(const std::string& label)
{
    return label.rfind(kXPrefix, 0) == 0;
}

}  // namespace

bool FieldShape::has_embedding(const std::string& s) const
{
    return std::find(embeddings.begin(), embeddings.end(), s) != embeddings.end();
}

void FieldShape::validate() const
{
    if (e <= 0 || f <= 0)
        throw std::invalid_argument("FieldShape: e and f must be positive");
    if (static_cast<int>(embeddings.size()) != e * f)
        throw std::invalid_argument("FieldShape: need exactly e*f embedding labels");
    std::set<std::string> seen;
    for (const auto& s : embeddings) {
        if (!seen.insert(s).second)
            throw std::invalid_argument("FieldShape: duplicate embedding label '" + s + "'");
        if (is_x_label(s) || s == kEpsSm || s == kAbs)
            throw std::invalid_argument("FieldShape: reserved embedding label '" + s + "'");
    }
    for (const auto& [name, info] : generators) {
        if (is_x_label(name) || name == kEpsSm || name == kAbs)
            throw std::invalid_argument("FieldShape: reserved generator name '" + name + "'");
        for (const auto& [emb, w] : info.weights) {
            if (!has_embedding(emb))
                throw std::invalid_argument("FieldShape: generator '" + name
                                            + "' weights unknown embedding '" + emb + "'");
            if (info.smooth && !w.is_zero())
                throw std::invalid_argument("FieldShape: smooth generator '" + name
                                            + "' must have zero weights");
        }
    }
}

FieldShapePtr make_field_shape(FieldShape s)
{
    s.validate();
    return std::make_shared<const FieldShape>(std::move(s));
}

FieldShapePtr qp_shape()
{
    FieldShape s;
    s.e = 1;
    s.f = 1;
    s.embeddings = {"s0"};
    return make_field_shape(std::move(s));
}

void Character::check_label(const std::string& label) const
{
    if (label == kEpsSm || label == kAbs)
        return;
    if (is_x_label(label)) {
        if (!shape_->has_embedding(label.substr(kXPrefix.size())))
            throw std::invalid_argument("Character: unknown embedding in '" + label + "'");
        return;
    }
    if (!shape_->generators.count(label))
        throw std::invalid_argument("Character: undeclared generator '" + label + "'");
}

void Character::set_exponent(const std::string& label, long long e)
{
    if (e == 0)
        exps_.erase(label);
    else
        exps_[label] = e;
}

Character Character::generator(FieldShapePtr shape, const std::string& label, long long exp)
{
    Character c(std::move(shape));
    c.check_label(label);
    c.set_exponent(label, exp);
    return c;
}

Character Character::x(FieldShapePtr shape, const std::string& emb, long long exp)
{
    return generator(std::move(shape), kXPrefix + emb, exp);
}

Character Character::eps_sm(FieldShapePtr shape, long long exp)
{
    return generator(std::move(shape), kEpsSm, exp);
}

Character Character::abs_k(FieldShapePtr shape, long long exp)
{
    return generator(std::move(shape), kAbs, exp);
}

long long Character::exponent(const std::string& label) const
{
    auto it = exps_.find(label);
    return it == exps_.end() ? 0 : it->second;
}

Rat Character::weight(const std::string& emb) const
{
    if (!shape_->has_embedding(emb))
        throw std::invalid_argument("Character::weight: unknown embedding '" + emb + "'");
    Rat w(0);
    for (const auto& [label, exp] : exps_) {
        if (is_x_label(label)) {
            if (label.substr(kXPrefix.size()) == emb)
                w += Rat(exp);
        } else if (label != kEpsSm && label != kAbs) {
            const GenInfo& info = shape_->generators.at(label);
            auto it = info.weights.find(emb);
            if (it != info.weights.end())
                w += Rat(exp) * it->second;
        }
    }
    return w;
}

Rat Character::uval() const
{
    Rat u(0);
    for (const auto& [label, exp] : exps_) {
        if (is_x_label(label))
            u += Rat(exp) * Rat(BigInt(1), BigInt(shape_->e));
        else if (label == kAbs)
            u += Rat(exp) * Rat(-shape_->f);
        else if (label == kEpsSm)
            u += Rat(exp) * Rat(-shape_->f);  // smooth part of the cyclotomic character
        else
            u += Rat(exp) * shape_->generators.at(label).uval;
    }
    return u;
}

bool Character::is_smooth() const
{
    for (const auto& emb : shape_->embeddings)
        if (!weight(emb).is_zero())
            return false;
    return true;
}

Character Character::inverse() const
{
    Character c(shape_);
    for (const auto& [label, exp] : exps_)
        c.exps_[label] = -exp;
    return c;
}

Character Character::pow(long long k) const
{
    Character c(shape_);
    if (k != 0)
        for (const auto& [label, exp] : exps_)
            c.exps_[label] = exp * k;
    return c;
}

Character operator*(const Character& a, const Character& b)
{
    if (!(*a.shape_ == *b.shape_))
        throw std::invalid_argument("Character: mismatched field shapes");
    Character c = a;
    for (const auto& [label, exp] : b.exps_)
        c.set_exponent(label, c.exponent(label) + exp);
    return c;
}

Character operator/(const Character& a, const Character& b)
{
    return a * b.inverse();
}

Character combine(const Character& a, const Character& b, int sign)
{
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("combine: sign must be +1 or -1");
    return sign == 1 ? a * b : a / b;
}

std::string Character::to_string() const
{
    if (exps_.empty())
        return "1";
    std::string s;
    for (const auto& [label, exp] : exps_) {
        if (!s.empty())
            s += "*";
        s += label;
        if (exp != 1)
            s += "^" + std::to_string(exp);
    }
    return s;
}

CohProfile classify_rank1(const Character& delta)
{
    const FieldShape& shape = *delta.shape();
    CohProfile prof;

    // h0: delta = x^{-k}, k in N^Sigma, no other generators.
    bool h0 = true;
    for (const auto& [label, exp] : delta.exponents()) {
        if (!is_x_label(label) || exp > 0) {
            h0 = false;
            break;
        }
    }
    if (h0) {
        prof.h0 = 1;
        std::map<std::string, long long> k;
        for (const auto& emb : shape.embeddings)
            k[emb] = -delta.exponent(kXPrefix + emb);
        prof.witness = std::move(k);
    }

    // h2: delta = EPS_SM * x^{k}, k in N^Sigma, no other generators.
    bool h2 = delta.exponent(kEpsSm) == 1;
    if (h2) {
        for (const auto& [label, exp] : delta.exponents()) {
            if (label == kEpsSm)
                continue;
            if (!is_x_label(label) || exp < 0) {
                h2 = false;
                break;
            }
        }
    }
    if (h2) {
        prof.h2 = 1;
        std::map<std::string, long long> k;
        for (const auto& emb : shape.embeddings)
            k[emb] = delta.exponent(kXPrefix + emb);
        prof.witness = std::move(k);
    }

    prof.h1 = shape.degree() + ((prof.h0 > 0 || prof.h2 > 0) ? 1 : 0);
    return prof;
}

RegularityFlags tuple_regularity(const std::vector<Character>& deltas)
{
    if (deltas.empty())
        throw std::invalid_argument("tuple_regularity: empty tuple");
    RegularityFlags flags;
    const size_t n = deltas.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            Character ratio = deltas[i] / deltas[j];
            CohProfile prof = classify_rank1(ratio);
            if (prof.h0 > 0) {
                flags.in_Treg = false;
                flags.violations.push_back({i + 1, j + 1, "h0", std::nullopt});
            }
            if (prof.h2 > 0) {
                flags.in_Treg = false;
                flags.in_Twreg = false;
                flags.violations.push_back({i + 1, j + 1, "h2", std::nullopt});
            }
            if (i < j) {
                for (const auto& emb : deltas[i].shape()->embeddings) {
                    Rat w = ratio.weight(emb);
                    if (w.is_integer() && w >= Rat(1)) {
                        flags.in_Tcirc = false;
                        flags.violations.push_back({i + 1, j + 1, "weight", emb});
                    }
                }
            }
        }
    }
    return flags;
}

std::vector<Rat> weight_map(const std::vector<Character>& deltas, const std::string& sigma)
{
    std::vector<Rat> w;
    w.reserve(deltas.size());
    for (const auto& d : deltas)
        w.push_back(d.weight(sigma));
    return w;
}

}  // namespace twc
