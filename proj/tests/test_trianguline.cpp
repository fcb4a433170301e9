#include "twc/trianguline.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>

using namespace twc;

namespace {

TriangModule split_intro_example(bool ascending)
{
    // R(x) + R(x^2), either triangulation order, split (all flags false)
    auto qp = qp_shape();
    Character x = Character::x(qp, "s0");
    std::vector<Character> params =
        ascending ? std::vector<Character>{x, x.pow(2)} : std::vector<Character>{x.pow(2), x};
    return TriangModule::make(params, {false}, {false}, ClassTag::Plain);
}

FieldShapePtr shape_with_smooth(int count)
{
    FieldShape s;
    s.e = 1;
    s.f = 1;
    s.embeddings = {"s0"};
    for (int i = 1; i <= count; ++i)
        s.generators["phi" + std::to_string(i)] = GenInfo{{}, Rat(0), true};
    return make_field_shape(std::move(s));
}

TriangModule crys_module(const std::vector<long long>& h, ClassTag tag, int mixed_m = 0)
{
    auto shape = shape_with_smooth(static_cast<int>(h.size()));
    std::vector<Character> params;
    for (size_t i = 0; i < h.size(); ++i)
        params.push_back(Character::x(shape, "s0", h[i])
                         * Character::generator(shape, "phi" + std::to_string(i + 1)));
    std::vector<bool> flags(h.size() - 1, true);
    return TriangModule::make(params, flags, flags, tag, mixed_m);
}

}  // namespace

TEST_SUITE_BEGIN("trianguline");

TEST_CASE("construction enforces flag and tag invariants")
{
    auto qp = qp_shape();
    Character x = Character::x(qp, "s0");
    // graded_nonsplit implies step_nonsplit
    CHECK_THROWS_AS(TriangModule::make({x, x.pow(2)}, {false}, {true}, ClassTag::Plain),
                    std::invalid_argument);
    // strongly non-split very generic requires T_circ parameters: wt(x/x^2)=-1 ok,
    // but the reversed order has wt(x^2/x)=1
    CHECK_THROWS_AS(TriangModule::make({x.pow(2), x}, {true}, {true},
                                       ClassTag::VeryGenericStronglyNonSplit),
                    std::invalid_argument);
    // the non-split-but-not-strongly configuration is constructible
    TriangModule d = TriangModule::make({x, x.pow(2)}, {true}, {false}, ClassTag::Plain);
    CHECK(d.step_nonsplit[0]);
    CHECK(!d.graded_nonsplit[0]);
    // crystabelline non-critical needs strictly decreasing integer weights
    CHECK_THROWS_AS(crys_module({0, 2}, ClassTag::CrystabellineNonCritical),
                    std::invalid_argument);
    CHECK_NOTHROW(crys_module({2, 0}, ClassTag::CrystabellineNonCritical));
}

TEST_CASE("pullback weight shift on the split rank-2 example")
{
    for (long long k = 1; k <= 5; ++k) {
        TriangModule d1 = pullback_p(split_intro_example(true), 1, "s0", k);
        CHECK(d1.sigma_weights("s0") == std::vector<Rat>{Rat(1), Rat(2 + k)});
        TriangModule d2 = pullback_p(split_intro_example(false), 1, "s0", k);
        CHECK(d2.sigma_weights("s0") == std::vector<Rat>{Rat(2), Rat(1 + k)});
    }
    TriangModule same = pullback_p(split_intro_example(true), 1, "s0", 0);
    CHECK(same.params == split_intro_example(true).params);
    CHECK_THROWS_AS(pullback_p(split_intro_example(true), 3, "s0", 1), std::invalid_argument);
}

TEST_CASE("pushout and the push-pull twist identity")
{
    TriangModule d = split_intro_example(true);
    TriangModule io = pushout_iota(d, 1, "s0", 1);
    CHECK(io.params[0].is_trivial());
    CHECK(io.params[1] == d.params[1]);
    CHECK(pushout_iota(d, 1, "s0", 0).params == d.params);

    // x^k * iota_k(D) == p_k(D) componentwise, for all i, k
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long long> kd(0, 4);
    for (int t = 0; t < 50; ++t) {
        long long k = kd(rng);
        for (int i = 1; i <= 2; ++i) {
            TriangModule via_iota = pushout_iota(d, i, "s0", k);
            Character twist = Character::x(d.shape(), "s0", k);
            for (auto& p : via_iota.params)
                p = p * twist;
            CHECK(via_iota.params == pullback_p(d, i, "s0", k).params);
        }
    }
}

TEST_CASE("invertibility gate on pinned weight pairs")
{
    FieldShape s;
    s.e = 1;
    s.f = 1;
    s.embeddings = {"s0"};
    s.generators["g"] = GenInfo{{{"s0", Rat(BigInt(1), BigInt(2))}}, Rat(0), false};
    auto shape = make_field_shape(std::move(s));

    SUBCASE("non-integer difference passes")
    {
        TriangModule d = TriangModule::make(
            {Character::generator(shape, "g"), Character::trivial(shape)}, {false}, {false},
            ClassTag::Plain);
        CHECK(invertibility_gate(d, 1, {{"s0", 1}}).ok);
    }
    SUBCASE("difference 3 against k = 3 fails with the violating pair")
    {
        auto qp = qp_shape();
        TriangModule d = TriangModule::make(
            {Character::x(qp, "s0", 3), Character::trivial(qp)}, {false}, {false},
            ClassTag::Plain);
        GateReport r3 = invertibility_gate(d, 1, {{"s0", 3}});
        CHECK(!r3.ok);
        REQUIRE(r3.violations.size() == 1);
        CHECK(r3.violations[0].j == 1);
        CHECK(r3.violations[0].l == 2);
        CHECK(r3.violations[0].weight_difference == Rat(3));
        CHECK(invertibility_gate(d, 1, {{"s0", 2}}).ok);
    }
}

TEST_CASE("wall membership on pinned weights")
{
    CHECK(wall_member({Rat(2), Rat(0)}, 1, WallInterval(0, 1)).member);
    WallReport hit = wall_member({Rat(2), Rat(1)}, 1, WallInterval(0, 1));
    CHECK(!hit.member);
    REQUIRE(hit.hits.size() == 1);
    CHECK(hit.hits[0].j == 1);
    CHECK(hit.hits[0].l == 2);
    CHECK(hit.hits[0].h == 1);
    CHECK(!wall_member({Rat(2), Rat(2)}, 1, WallInterval(0, 0)).member);
    CHECK_THROWS_AS(WallInterval(1, 2), std::invalid_argument);
}

namespace {

// Literal quantifier transcription, kept independent of the library routine.
bool wall_program_brute(const std::vector<Rat>& h, const std::vector<int>& i_cut,
                        const std::vector<long long>& mult, bool negative)
{
    const int n = static_cast<int>(h.size());
    const int d = static_cast<int>(i_cut.size());
    auto cut = [&](int m) { return m <= 0 ? 0 : (m > d ? n : i_cut[m - 1]); };
    for (int m = 0; m <= d; ++m)
        for (int j = n + 1 - cut(m + 1); j < n + 1 - cut(m); ++j)
            for (int mp = 0; mp < m; ++mp)
                for (int k = n + 1 - cut(mp + 1); k < n + 1 - cut(mp); ++k) {
                    long long bound = 0;
                    for (int r = mp + 1; r <= m; ++r)
                        bound += mult[r - 1];
                    for (long long a = 0; a <= bound; ++a)
                        if (h[j - 1] == h[k - 1] + Rat(negative ? -a : a))
                            return false;
                }
    return true;
}

}  // namespace

TEST_CASE("wall_member_program agrees with the literal quantifier")
{
    SUBCASE("reduction to the single-interval wall")
    {
        std::map<std::string, std::vector<Rat>> w{{"s0", {Rat(2), Rat(0)}}};
        auto r = wall_member_program(w, {"s0"}, {{"s0", {1}}}, {{"s0", {1}}}, false);
        CHECK(r.member == wall_member({Rat(2), Rat(0)}, 1, WallInterval(0, 1)).member);
        auto r0 = wall_member_program(w, {"s0"}, {{"s0", {1}}}, {{"s0", {0}}}, false);
        CHECK(r0.member == wall_member({Rat(2), Rat(0)}, 1, WallInterval(0, 0)).member);
    }
    SUBCASE("pinned n=3 instance against the brute transcription")
    {
        std::map<std::string, std::vector<Rat>> w{{"s0", {Rat(5), Rat(3), Rat(0)}}};
        auto r = wall_member_program(w, {"s0"}, {{"s0", {1, 2}}}, {{"s0", {1, 1}}}, false);
        CHECK(r.member == wall_program_brute({Rat(5), Rat(3), Rat(0)}, {1, 2}, {1, 1}, false));
    }
    SUBCASE("randomized agreement including the -k variant")
    {
        std::mt19937_64 rng(29);
        std::uniform_int_distribution<long long> wdist(-3, 6);
        std::uniform_int_distribution<int> ndist(2, 4);
        std::uniform_int_distribution<long long> kdist(0, 2);
        std::uniform_int_distribution<int> coin(0, 1);
        for (int t = 0; t < 300; ++t) {
            int n = ndist(rng);
            std::vector<Rat> h;
            for (int i = 0; i < n; ++i)
                h.push_back(Rat(wdist(rng)));
            std::vector<int> i_cut;
            for (int i = 1; i <= n; ++i)
                if (coin(rng))
                    i_cut.push_back(i);
            if (i_cut.empty())
                i_cut.push_back(1);
            std::vector<long long> mult;
            for (size_t i = 0; i < i_cut.size(); ++i)
                mult.push_back(kdist(rng));
            bool neg = coin(rng) == 1;
            std::map<std::string, std::vector<Rat>> w{{"s0", h}};
            auto got = wall_member_program(w, {"s0"}, {{"s0", i_cut}}, {{"s0", mult}}, neg);
            CHECK(got.member == wall_program_brute(h, i_cut, mult, neg));
        }
    }
}

TEST_CASE("apply_program order independence, exhaustive n <= 4, two embeddings, mult <= 2")
{
    FieldShape s;
    s.e = 1;
    s.f = 2;
    s.embeddings = {"s0", "s1"};
    auto shape = make_field_shape(std::move(s));
    for (int n = 1; n <= 4; ++n) {
        std::vector<Character> params;
        for (int i = 0; i < n; ++i)
            params.push_back(Character::x(shape, "s0", 2 * (n - i))
                             * Character::x(shape, "s1", 3 * (n - i)));
        TriangModule d = TriangModule::make(params, std::vector<bool>(n - 1, false),
                                            std::vector<bool>(n - 1, false), ClassTag::Plain);
        // all multiplicity assignments (i, sigma) -> {0, 1, 2}
        const int slots = 2 * n;
        std::vector<long long> mult(slots, 0);
        long long total_checked = 0;
        std::function<void(int)> rec = [&](int slot) {
            if (slot == slots) {
                Program forward, backward;
                for (int t = 0; t < slots; ++t) {
                    if (mult[t] == 0)
                        continue;
                    int i = t / 2 + 1;
                    std::string sigma = (t % 2 == 0) ? "s0" : "s1";
                    for (long long rep = 0; rep < mult[t]; ++rep)
                        forward.push_back({i, sigma, 1});
                }
                backward.assign(forward.rbegin(), forward.rend());
                TriangModule a = apply_program(d, forward);
                TriangModule b = apply_program(d, backward);
                REQUIRE(a.params == b.params);
                ++total_checked;
                return;
            }
            for (long long v = 0; v <= 2; ++v) {
                mult[slot] = v;
                rec(slot + 1);
            }
        };
        rec(0);
        CHECK(total_checked == static_cast<long long>(std::pow(3, slots)));
    }
}

TEST_CASE("empty program is the identity; q-program undoes a p-program")
{
    TriangModule d = crys_module({4, 2, 0}, ClassTag::CrystabellineNonCritical);
    CHECK(apply_program(d, {}).params == d.params);

    Program p = {{1, "s0", 1}, {2, "s0", 1}};
    Program q = {{2, "s0", -1}, {1, "s0", -1}};
    TriangModule forward = apply_program(d, p, ProgramMode::Strict);
    Program both = p;
    both.insert(both.end(), q.begin(), q.end());
    CHECK(apply_program(d, both, ProgramMode::Strict).params == d.params);
    CHECK(forward.sigma_weights("s0") == std::vector<Rat>{Rat(4), Rat(3), Rat(2)});
}

TEST_CASE("apply_program gate violation reports the first bad step")
{
    // weights (1, 0): a single p_1 step has difference 1 in {1}
    TriangModule d = crys_module({1, 0}, ClassTag::CrystabellineNonCritical);
    CHECK_THROWS_AS(apply_program(d, {{1, "s0", 1}}, ProgramMode::Strict), gate_error);
    CHECK_THROWS_AS(apply_program(d, {{1, "s0", 1}}, ProgramMode::Substack), gate_error);
    // free mode applies regardless
    CHECK(apply_program(d, {{1, "s0", 1}}).sigma_weights("s0")
          == std::vector<Rat>{Rat(1), Rat(1)});
}

TEST_CASE("enumerate_triangulations counts")
{
    SUBCASE("crystabelline: n! refinements with position-fixed weights")
    {
        for (int n = 2; n <= 5; ++n) {
            std::vector<long long> h;
            for (int i = 0; i < n; ++i)
                h.push_back(2 * (n - i));
            TriangModule d = crys_module(h, ClassTag::CrystabellineNonCritical);
            auto tris = enumerate_triangulations(d);
            long long expect = 1;
            for (int i = 2; i <= n; ++i)
                expect *= i;
            CHECK(static_cast<long long>(tris.size()) == expect);
            for (const auto& tri : tris)
                CHECK(weight_map(tri.params, "s0") == d.sigma_weights("s0"));
        }
    }
    SUBCASE("very generic strongly non-split: unique")
    {
        FieldShape s;
        s.e = 1;
        s.f = 1;
        s.embeddings = {"s0"};
        s.generators["u1"] = GenInfo{{{"s0", Rat(BigInt(1), BigInt(2))}}, Rat(0), false};
        s.generators["u2"] = GenInfo{{{"s0", Rat(BigInt(1), BigInt(3))}}, Rat(0), false};
        s.generators["u3"] = GenInfo{{{"s0", Rat(BigInt(1), BigInt(5))}}, Rat(0), false};
        auto shape = make_field_shape(std::move(s));
        std::vector<Character> params = {Character::generator(shape, "u1"),
                                         Character::generator(shape, "u2"),
                                         Character::generator(shape, "u3")};
        TriangModule d = TriangModule::make(params, {true, true}, {true, true},
                                            ClassTag::VeryGenericStronglyNonSplit);
        CHECK(enumerate_triangulations(d).size() == 1);
    }
    SUBCASE("Mixed(1) with n = 3 has 2 triangulations")
    {
        FieldShape s;
        s.e = 1;
        s.f = 1;
        s.embeddings = {"s0"};
        s.generators["u1"] = GenInfo{{{"s0", Rat(BigInt(1), BigInt(2))}}, Rat(0), false};
        s.generators["phi1"] = GenInfo{{}, Rat(0), true};
        s.generators["phi2"] = GenInfo{{}, Rat(0), true};
        auto shape = make_field_shape(std::move(s));
        std::vector<Character> params = {
            Character::generator(shape, "u1"),
            Character::x(shape, "s0", 3) * Character::generator(shape, "phi1"),
            Character::x(shape, "s0", 1) * Character::generator(shape, "phi2")};
        TriangModule d = TriangModule::make(params, {true, true}, {true, true}, ClassTag::Mixed, 1);
        auto tris = enumerate_triangulations(d);
        CHECK(tris.size() == 2);
        for (const auto& tri : tris) {
            CHECK(tri.w[0] == 1);  // head is frozen
            CHECK(tri.params[0] == params[0]);
        }
    }
    SUBCASE("plain modules have no classification")
    {
        CHECK_THROWS_AS(enumerate_triangulations(split_intro_example(true)), gate_error);
    }
}

TEST_CASE("a non-split extension with split second graded piece is constructible")
{
    // parameters (x, |x|x, 1): the whole extension class is nonzero while the
    // rank-2 graded piece between steps 1 and 2 splits, so the triangulation
    // is not strongly non-split
    auto qp = qp_shape();
    Character x = Character::x(qp, "s0");
    std::vector<Character> params = {x, Character::abs_k(qp) * x, Character::trivial(qp)};
    TriangModule d = TriangModule::make(params, {false, true}, {false, true}, ClassTag::Plain);
    CHECK(!d.graded_nonsplit[0]);
    CHECK(d.step_nonsplit[1]);
    CHECK_THROWS_AS(TriangModule::make(params, {false, true}, {false, true},
                                       ClassTag::VeryGenericStronglyNonSplit),
                    std::invalid_argument);
}

TEST_CASE("the +k wall schedule maps to the -k schedule under the program")
{
    // whenever the +k predicate admits the program, the shifted weights must
    // satisfy the -k predicate and the inverse program must return the start
    std::mt19937_64 rng(97);
    std::uniform_int_distribution<long long> wdist(-4, 8);
    std::uniform_int_distribution<int> ndist(2, 4);
    std::uniform_int_distribution<long long> kdist(0, 2);
    std::uniform_int_distribution<int> coin(0, 1);
    FieldShape fs;
    fs.e = 1;
    fs.f = 1;
    fs.embeddings = {"s0"};
    auto shape = make_field_shape(std::move(fs));
    int admitted = 0;
    for (int t = 0; t < 400; ++t) {
        int n = ndist(rng);
        std::vector<Character> params;
        for (int i = 0; i < n; ++i)
            params.push_back(Character::x(shape, "s0", wdist(rng)));
        TriangModule d = TriangModule::make(params, std::vector<bool>(n - 1, false),
                                            std::vector<bool>(n - 1, false), ClassTag::Plain);
        std::vector<int> i_cut;
        std::vector<long long> mult;
        for (int i = 1; i <= n; ++i)
            if (coin(rng)) {
                i_cut.push_back(i);
                mult.push_back(kdist(rng));
            }
        if (i_cut.empty())
            continue;
        std::map<std::string, std::vector<Rat>> w{{"s0", d.sigma_weights("s0")}};
        if (!wall_member_program(w, {"s0"}, {{"s0", i_cut}}, {{"s0", mult}}, false).member)
            continue;
        ++admitted;
        Program program, inverse;
        for (size_t r = 0; r < i_cut.size(); ++r) {
            if (mult[r] == 0)
                continue;
            program.push_back({i_cut[r], "s0", mult[r]});
            inverse.push_back({i_cut[r], "s0", -mult[r]});
        }
        TriangModule after = apply_program(d, program, ProgramMode::Substack);
        std::map<std::string, std::vector<Rat>> w2{{"s0", after.sigma_weights("s0")}};
        CHECK(wall_member_program(w2, {"s0"}, {{"s0", i_cut}}, {{"s0", mult}}, true).member);
        CHECK(apply_program(after, inverse, ProgramMode::Substack).params == d.params);
    }
    CHECK(admitted > 50);
}

TEST_CASE("weight_uniform_check")
{
    std::map<std::string, std::vector<Rat>> a{{"s0", {Rat(2), Rat(0)}}};
    std::map<std::string, std::vector<Rat>> b{{"s0", {Rat(2), Rat(0)}}};
    std::map<std::string, std::vector<Rat>> c{{"s0", {Rat(0), Rat(2)}}};
    CHECK(weight_uniform_check({a, b}, {"s0"}));
    CHECK(weight_uniform_check({a}, {"s0"}));
    CHECK(!weight_uniform_check({a, c}, {"s0"}));
    std::map<std::string, std::vector<Rat>> ragged{{"s0", {Rat(2)}}};
    CHECK_THROWS_AS(weight_uniform_check({a, ragged}, {"s0"}), std::invalid_argument);
    CHECK_THROWS_AS(weight_uniform_check({}, {"s0"}), std::invalid_argument);

    // non-critical crystabelline: every enumerated ordering gives the same map
    TriangModule d = crys_module({3, 1, 0}, ClassTag::CrystabellineNonCritical);
    std::vector<std::map<std::string, std::vector<Rat>>> orderings;
    for (const auto& tri : enumerate_triangulations(d))
        orderings.push_back({{"s0", weight_map(tri.params, "s0")}});
    CHECK(weight_uniform_check(orderings, {"s0"}));
}

TEST_SUITE_END();
