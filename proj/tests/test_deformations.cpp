#include "twc/deformations.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <numeric>

using namespace twc;
using testutil::rand_rat;

namespace {

TriangModule nc_base(const std::vector<long long>& h)
{
    FieldShape s;
    s.e = 1;
    s.f = 1;
    s.embeddings = {"s0"};
    for (size_t i = 1; i <= h.size(); ++i)
        s.generators["phi" + std::to_string(i)] = GenInfo{{}, Rat(-(long long)i), true};
    auto shape = make_field_shape(std::move(s));
    std::vector<Character> params;
    for (size_t i = 0; i < h.size(); ++i)
        params.push_back(Character::x(shape, "s0", h[i])
                         * Character::generator(shape, "phi" + std::to_string(i + 1)));
    return TriangModule::make(params, std::vector<bool>(h.size() - 1, true),
                              std::vector<bool>(h.size() - 1, true),
                              ClassTag::CrystabellineNonCritical);
}

ExtClassModel random_class(std::mt19937_64& rng, const TriangModule& base)
{
    std::vector<DeformDirection> psis(base.n());
    for (auto& psi : psis)
        psi = {rand_rat(rng, -5, 5), rand_rat(rng, -5, 5)};
    return ExtClassModel::make(base, Refinement::identity(base.n()), psis);
}

std::vector<Refinement> all_refinements(int n)
{
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 1);
    std::vector<Refinement> out;
    do {
        out.push_back(Refinement::of(base));
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("deformations");

TEST_CASE("baer sum adds kappa coordinates")
{
    TriangModule base = nc_base({2, 0});
    ExtClassModel a = ExtClassModel::make(base, Refinement::identity(2),
                                          {{Rat(1), Rat(0)}, {Rat(1), Rat(0)}});
    ExtClassModel b = ExtClassModel::make(base, Refinement::identity(2),
                                          {{Rat(0), Rat(1)}, {Rat(0), Rat(1)}});
    ExtClassModel sum = baer_sum(a, b);
    CHECK(kappa(sum) == std::vector<Rat>{Rat(1), Rat(1), Rat(1), Rat(1)});

    ExtClassModel zero = ExtClassModel::make(base, Refinement::identity(2),
                                             {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}});
    CHECK(kappa(baer_sum(a, zero)) == kappa(a));
    CHECK(kappa(baer_sum(a, negate(a))) == kappa(zero));
}

TEST_CASE("kappa, baer_sum, pullback_ext are compatible homomorphisms")
{
    std::mt19937_64 rng(31);
    TriangModule base = nc_base({4, 2, 0});
    Program program = {{1, "s0", 1}, {2, "s0", 1}};
    for (int t = 0; t < 200; ++t) {
        ExtClassModel c1 = random_class(rng, base);
        ExtClassModel c2 = random_class(rng, base);
        // kappa(c1 + c2) = kappa(c1) + kappa(c2)
        auto k1 = kappa(c1), k2 = kappa(c2), ks = kappa(baer_sum(c1, c2));
        for (size_t i = 0; i < ks.size(); ++i)
            CHECK(ks[i] == k1[i] + k2[i]);
        // kappa after pullback = kappa before
        CHECK(kappa(pullback_ext(c1, program)) == k1);
        // additivity of the pullback
        CHECK(kappa(baer_sum(pullback_ext(c1, program), pullback_ext(c2, program)))
              == kappa(pullback_ext(baer_sum(c1, c2), program)));
    }
}

TEST_CASE("sen_poly_deform")
{
    SUBCASE("zero directions give the base Sen polynomial")
    {
        TriangModule base = nc_base({2, 0});
        ExtClassModel c = ExtClassModel::make(base, Refinement::identity(2),
                                              {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}});
        CHECK(sen_poly_deform(c) == Poly<DualNum>::from_roots({DualNum(Rat(2)), DualNum(Rat(0))}));
    }
    SUBCASE("n = 1, weight 0, wtd 1 gives T - eps")
    {
        TriangModule base = nc_base({0});
        ExtClassModel c = ExtClassModel::make(base, Refinement::identity(1), {{Rat(0), Rat(1)}});
        CHECK(sen_poly_deform(c) == Poly<DualNum>{DualNum(Rat(0), Rat(-1)), DualNum(Rat(1))});
    }
    SUBCASE("eps parts of a Baer sum add")
    {
        std::mt19937_64 rng(41);
        TriangModule base = nc_base({3, 1, 0});
        for (int t = 0; t < 100; ++t) {
            ExtClassModel c1 = random_class(rng, base);
            ExtClassModel c2 = random_class(rng, base);
            Poly<DualNum> p1 = sen_poly_deform(c1);
            Poly<DualNum> p2 = sen_poly_deform(c2);
            Poly<DualNum> ps = sen_poly_deform(baer_sum(c1, c2));
            // the deformed roots are h_i + (a_i + b_i) eps
            std::vector<DualNum> roots;
            for (int i = 0; i < 3; ++i)
                roots.emplace_back(c1.base.params[i].weight("s0"),
                                   c1.psis[i].wtd + c2.psis[i].wtd);
            CHECK(ps == Poly<DualNum>::from_roots(roots));
            (void)p1;
            (void)p2;
        }
    }
}

TEST_CASE("universal extension evaluator")
{
    SUBCASE("single class pulls back to itself")
    {
        UniversalExt uni = universal_extension({{Rat(1), Rat(2), Rat(3), Rat(4)}});
        CHECK(uni.pullback({Rat(1)}) == std::vector<Rat>{Rat(1), Rat(2), Rat(3), Rat(4)});
    }
    SUBCASE("standard basis evaluation")
    {
        UniversalExt uni =
            universal_extension({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
        CHECK(uni.pullback({Rat(1), Rat(0)}) == std::vector<Rat>{Rat(1), Rat(0)});
        CHECK(uni.pullback({Rat(3), Rat(-2)}) == std::vector<Rat>{Rat(3), Rat(-2)});
    }
    SUBCASE("basis change yields the same pullback values")
    {
        std::vector<std::vector<Rat>> w1 = {{Rat(1), Rat(0), Rat(1)}, {Rat(0), Rat(1), Rat(1)}};
        std::vector<std::vector<Rat>> w2 = {{Rat(1), Rat(1), Rat(2)}, {Rat(1), Rat(-1), Rat(0)}};
        UniversalExt u1 = universal_extension(w1), u2 = universal_extension(w2);
        // same span; any vector of the span pulls back to itself in both
        std::vector<Rat> e = {Rat(2), Rat(1), Rat(3)};
        auto c1 = u1.coordinates(e);
        auto c2 = u2.coordinates(e);
        REQUIRE(c1.has_value());
        REQUIRE(c2.has_value());
        CHECK(u1.pullback(*c1) == e);
        CHECK(u2.pullback(*c2) == e);
    }
    SUBCASE("dependent basis is rejected")
    {
        CHECK_THROWS_AS(universal_extension({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}),
                        std::invalid_argument);
    }
}

TEST_CASE("theta and rho")
{
    auto [theta3, rho3] = theta_rho(3);
    CHECK(theta3.v == std::vector<Rat>{Rat(0), Rat(-1), Rat(-2)});
    CHECK(rho3.v == std::vector<Rat>{Rat(1), Rat(0), Rat(-1)});
    auto [theta1, rho1] = theta_rho(1);
    CHECK(theta1.v == std::vector<Rat>{Rat(0)});
    CHECK(rho1.v == std::vector<Rat>{Rat(0)});
    auto rho2 = theta_rho(2).second;
    CHECK(rho2.v == std::vector<Rat>{Rat(BigInt(1), BigInt(2)), Rat(BigInt(-1), BigInt(2))});
    // theta = rho + ((1-n)/2)(1,...,1)
    for (int n = 1; n <= 6; ++n) {
        auto [theta, rho] = theta_rho(n);
        for (int i = 0; i < n; ++i)
            CHECK(theta.v[i] == rho.v[i] + Rat(BigInt(1 - n), BigInt(2)));
    }
}

TEST_CASE("dot action identities")
{
    SUBCASE("identity fixes everything")
    {
        WeightVec lam{{Rat(3), Rat(1), Rat(0)}};
        CHECK(dot_action(Refinement::identity(3), lam) == lam);
        CHECK(bar_dot_action(Refinement::identity(3), lam) == lam);
    }
    SUBCASE("pinned n = 2: w0 . (w0 xi) = xi - 2 rho for xi = 0")
    {
        WeightVec xi{{Rat(0), Rat(0)}};
        Refinement w0 = longest_element(2);
        WeightVec twice = dot_action(w0, permute(w0, xi));
        CHECK(twice.v == std::vector<Rat>{Rat(-1), Rat(1)});
    }
    SUBCASE("w0 . (w0 xi) = xi - 2 rho on random weights, n <= 5")
    {
        std::mt19937_64 rng(59);
        for (int n = 1; n <= 5; ++n) {
            Refinement w0 = longest_element(n);
            WeightVec rho = theta_rho(n).second;
            for (int t = 0; t < 100; ++t) {
                WeightVec xi;
                for (int i = 0; i < n; ++i)
                    xi.v.push_back(rand_rat(rng, -9, 9, 3));
                WeightVec lhs = dot_action(w0, permute(w0, xi));
                WeightVec rhs = xi - rho - rho;
                CHECK(lhs == rhs);
            }
        }
    }
    SUBCASE("(vw) . lambda = v . (w . lambda)")
    {
        std::mt19937_64 rng(61);
        for (int t = 0; t < 100; ++t) {
            const int n = 4;
            auto refs = all_refinements(n);
            std::uniform_int_distribution<size_t> pick(0, refs.size() - 1);
            Refinement v = refs[pick(rng)], w = refs[pick(rng)];
            WeightVec lam;
            for (int i = 0; i < n; ++i)
                lam.v.push_back(rand_rat(rng, -9, 9, 2));
            // compose: (v w)(i) = v(w(i))
            std::vector<int> vw(n);
            for (int i = 0; i < n; ++i)
                vw[i] = v.w[w.w[i] - 1];
            CHECK(dot_action(Refinement::of(vw), lam) == dot_action(v, dot_action(w, lam)));
        }
    }
}

TEST_CASE("translation_admissible")
{
    SUBCASE("pinned: lambda from h=(2,0) against h'=(3,1)")
    {
        WeightVec lam{{Rat(2), Rat(1)}};
        WeightVec lam_p{{Rat(3), Rat(2)}};
        CHECK(translation_admissible(lam, lam_p).ok);
    }
    SUBCASE("non-integer difference")
    {
        WeightVec lam{{Rat(2), Rat(1)}};
        WeightVec lam_p{{Rat(BigInt(5), BigInt(2)), Rat(1)}};
        AdmissibilityReport r = translation_admissible(lam, lam_p);
        CHECK(!r.ok);
        REQUIRE(!r.reasons.empty());
        CHECK(r.reasons[0].find("integer") != std::string::npos);
    }
    SUBCASE("repeated entries sit on a wall")
    {
        WeightVec lam{{Rat(1), Rat(1)}};
        AdmissibilityReport r = translation_admissible(lam, lam);
        CHECK(!r.ok);
        CHECK(r.reasons[0].find("wall") != std::string::npos);
    }
    SUBCASE("different chambers")
    {
        WeightVec a{{Rat(2), Rat(0)}};
        WeightVec b{{Rat(0), Rat(2)}};
        CHECK(!translation_admissible(a, b).ok);
    }
}

TEST_CASE("translation_diff and its program consistency")
{
    SUBCASE("pinned n = 2")
    {
        WeightVec d = translation_diff({3, 5});
        CHECK(d.v == std::vector<Rat>{Rat(8), Rat(5)});
    }
    SUBCASE("zero program")
    {
        CHECK(translation_diff({0, 0, 0}).v == std::vector<Rat>(3, Rat(0)));
    }
    SUBCASE("pinned n = 3, k = (1, 0, 2)")
    {
        CHECK(translation_diff({1, 0, 2}).v == std::vector<Rat>{Rat(3), Rat(2), Rat(2)});
    }
    SUBCASE("h' - h from apply_program is the reversal, all programs n <= 5, k <= 3")
    {
        for (int n = 1; n <= 5; ++n) {
            std::vector<long long> h;
            for (int i = 0; i < n; ++i)
                h.push_back(8 * (n - i));  // wide gaps keep everything regular
            TriangModule base = nc_base(h);
            std::vector<long long> mult(n, 0);
            std::function<void(int)> rec = [&](int slot) {
                if (slot == n) {
                    Program program;
                    for (int i = 0; i < n; ++i)
                        if (mult[i] != 0)
                            program.push_back({i + 1, "s0", mult[i]});
                    TriangModule after = apply_program(base, program);
                    WeightVec diff = translation_diff(mult);
                    std::vector<Rat> gain = after.sigma_weights("s0");
                    const auto before = base.sigma_weights("s0");
                    for (int i = 0; i < n; ++i)
                        gain[i] -= before[i];
                    std::vector<Rat> reversed(diff.v.rbegin(), diff.v.rend());
                    CHECK(gain == reversed);
                    return;
                }
                for (long long v = 0; v <= 3; ++v) {
                    mult[slot] = v;
                    rec(slot + 1);
                }
            };
            rec(0);
        }
    }
}

TEST_CASE("intertwine_check")
{
    SUBCASE("h = (1, 0) with one p_1 step breaks regularity at gap 1")
    {
        IntertwineReport r = intertwine_check(nc_base({1, 0}), {{1, "s0", 1}});
        CHECK(!r.ok);
        CHECK(!r.regular_after);
        REQUIRE(r.violated_gap.has_value());
        CHECK(*r.violated_gap == 1);
    }
    SUBCASE("h = (2, 0) with one p_1 step passes all sub-checks")
    {
        IntertwineReport r = intertwine_check(nc_base({2, 0}), {{1, "s0", 1}});
        CHECK(r.regular_before);
        CHECK(r.regular_after);
        CHECK(r.kappa_identity);
        CHECK(r.diff_consistent);
        CHECK(r.admissible);
        CHECK(r.kernel_correspondence);
        CHECK(r.ok);
    }
    SUBCASE("empty program commutes trivially")
    {
        CHECK(intertwine_check(nc_base({3, 1, 0}), {}).ok);
    }
}

TEST_SUITE_END();
