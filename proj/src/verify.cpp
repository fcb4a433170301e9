#include "twc/verify.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace twc {

namespace {

Rat rand_rat(std::mt19937_64& rng, long long lo, long long hi, long long den_max = 1)
{
    std::uniform_int_distribution<long long> num(lo, hi);
    std::uniform_int_distribution<long long> den(1, den_max);
    return Rat(BigInt(num(rng)), BigInt(den(rng)));
}

std::vector<Rat> distinct_rats(std::mt19937_64& rng, int count, long long lo, long long hi)
{
    std::set<Rat> seen;
    std::vector<Rat> out;
    while (static_cast<int>(out.size()) < count) {
        Rat r = rand_rat(rng, lo, hi);
        if (seen.insert(r).second)
            out.push_back(r);
    }
    return out;
}

std::string describe_lattice(const SenLattice<Rat>& lat, const std::set<int>& index_set)
{
    std::ostringstream os;
    os << "theta=[";
    for (int i = 0; i < lat.n(); ++i) {
        os << (i ? ";" : "");
        for (int j = 0; j < lat.n(); ++j)
            os << (j ? "," : "") << lat.theta.at(i, j).to_string();
    }
    os << "] I={";
    for (int i : index_set)
        os << i << ",";
    os << "}";
    return os.str();
}

FieldShapePtr smooth_qp_shape(int count, const std::vector<Rat>& vps)
{
    FieldShape s;
    s.e = 1;
    s.f = 1;
    s.embeddings = {"s0"};
    for (int i = 1; i <= count; ++i)
        s.generators["phi" + std::to_string(i)] = GenInfo{{}, vps[i - 1], true};
    return make_field_shape(std::move(s));
}

TriangModule nc_module(const std::vector<long long>& h, const std::vector<Rat>& vps)
{
    auto shape = smooth_qp_shape(static_cast<int>(h.size()), vps);
    std::vector<Character> params;
    for (size_t i = 0; i < h.size(); ++i)
        params.push_back(Character::x(shape, "s0", h[i])
                         * Character::generator(shape, "phi" + std::to_string(i + 1)));
    return TriangModule::make(params, std::vector<bool>(h.size() - 1, true),
                              std::vector<bool>(h.size() - 1, true),
                              ClassTag::CrystabellineNonCritical);
}

std::vector<std::vector<int>> all_perms(int n)
{
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

}  // namespace

SuiteResult suite_lattice_uniqueness(unsigned long long seed, const ModifyFn& modify)
{
    SuiteResult result{"lattice-uniqueness", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ndist(2, 4);
    while (result.cases < 200) {
        const int n = ndist(rng);
        auto eigs = distinct_rats(rng, n, -6, 6);
        Mat<Rat> c(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c.at(i, j) = rand_rat(rng, -3, 3);
        auto c_inv = inverse(c);
        if (!c_inv)
            continue;
        Mat<Rat> diag(n);
        for (int i = 0; i < n; ++i)
            diag.at(i, i) = eigs[i];
        SenLattice<Rat> lat{c * diag * (*c_inv)};

        std::uniform_int_distribution<int> pick(1, (1 << n) - 2);
        int mask = pick(rng);
        std::set<int> index_set;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i))
                index_set.insert(i + 1);

        ++result.cases;
        auto fail = [&](const std::string& why) {
            ++result.failures;
            if (result.counterexample.empty())
                result.counterexample = why + " at " + describe_lattice(lat, index_set);
        };

        auto f = split_sen_poly(lat, eigs, index_set);
        auto modified = modify(lat, f);
        Poly<Rat> target = f.q.shift_arg(Rat(-1)) * f.s;
        if (charpoly(modified.lattice.theta) != target) {
            fail("modified Sen polynomial is not q(T-1)s(T)");
            continue;
        }
        auto oracle = brute_force_modifications(lat, target);
        if (!oracle.exhaustive || oracle.subspaces.size() != 1) {
            fail("oracle does not see a unique stable subspace");
            continue;
        }
        auto joint = oracle.subspaces[0];
        joint.insert(joint.end(), modified.w_basis.begin(), modified.w_basis.end());
        if (oracle.subspaces[0].size() != modified.w_basis.size()
            || rank(joint) != static_cast<int>(modified.w_basis.size())) {
            fail("oracle subspace differs from the constructed one");
            continue;
        }
        if (roundtrip_invertible(f)) {
            auto back_f = make_factorization(modified.lattice, f.q.shift_arg(Rat(-1)), f.s);
            if (modify_up(modified.lattice, back_f).lattice.theta != lat.theta)
                fail("round trip does not restore the operator");
        }
    }
    return result;
}

SuiteResult suite_lattice_uniqueness(unsigned long long seed)
{
    return suite_lattice_uniqueness(
        seed, [](const SenLattice<Rat>& lat, const SenFactorization<Rat>& f) {
            return modify_down(lat, f);
        });
}

SuiteResult suite_etale_equivalence(unsigned long long seed)
{
    SuiteResult result{"etale-oracle-equivalence", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ndist(1, 5);
    std::uniform_int_distribution<long long> vdist(-5, 5);
    std::uniform_int_distribution<long long> gap(1, 3);
    for (int t = 0; t < 500; ++t) {
        const int n = ndist(rng);
        std::vector<Rat> vps;
        for (int i = 0; i < n; ++i)
            vps.push_back(Rat(vdist(rng)));
        std::vector<long long> h;
        long long cur = vdist(rng) + 10;
        for (int i = 0; i < n; ++i) {
            h.push_back(cur);
            cur -= gap(rng);
        }
        auto shape = smooth_qp_shape(n, vps);
        std::vector<Character> phis;
        for (int i = 1; i <= n; ++i)
            phis.push_back(Character::generator(shape, "phi" + std::to_string(i)));
        CrysModule m = CrysModule::make(phis, {{"s0", h}}, {{"s0", Mat<Rat>::identity(n)}});
        ++result.cases;
        auto report = brute_force_etale(m);
        if (!report.agrees) {
            ++result.failures;
            if (result.counterexample.empty()) {
                std::ostringstream os;
                os << "vps=";
                for (const auto& v : vps)
                    os << v.to_string() << ",";
                os << " h=";
                for (long long x : h)
                    os << x << ",";
                result.counterexample = os.str();
            }
        }
    }
    return result;
}

SuiteResult suite_commutation()
{
    SuiteResult result{"pullback-commutation", 0, 0, {}};
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
        const int slots = 2 * n;
        std::vector<long long> mult(slots, 0);
        std::function<void(int)> rec = [&](int slot) {
            if (slot == slots) {
                Program forward;
                for (int t = 0; t < slots; ++t)
                    for (long long rep = 0; rep < mult[t]; ++rep)
                        forward.push_back({t / 2 + 1, t % 2 == 0 ? "s0" : "s1", 1});
                Program backward(forward.rbegin(), forward.rend());
                ++result.cases;
                if (!(apply_program(d, forward).params == apply_program(d, backward).params)) {
                    ++result.failures;
                    if (result.counterexample.empty()) {
                        std::ostringstream os;
                        os << "n=" << n << " mult=";
                        for (long long v : mult)
                            os << v << ",";
                        result.counterexample = os.str();
                    }
                }
                return;
            }
            for (long long v = 0; v <= 2; ++v) {
                mult[slot] = v;
                rec(slot + 1);
            }
        };
        rec(0);
    }
    return result;
}

SuiteResult suite_rearrangement(unsigned long long seed)
{
    SuiteResult result{"flag-rearrangement", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int n = 2; n <= 5; ++n) {
        std::vector<long long> jumps(n);
        for (int i = 0; i < n; ++i)
            jumps[i] = 2 * i;
        for (int trial = 0; trial < 3; ++trial) {
            Mat<Rat> flag(n);
            if (trial == 0) {
                flag = Mat<Rat>::identity(n);
            } else {
                do {
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            flag.at(i, j) = rand_rat(rng, -9, 9);
                } while (!inverse(flag));
            }
            for (const auto& images : all_perms(n)) {
                Refinement w = Refinement::of(images);
                auto j = flag_jumps(w, flag, jumps);
                ++result.cases;
                auto record = [&](const std::string& why) {
                    ++result.failures;
                    if (result.counterexample.empty()) {
                        std::ostringstream os;
                        os << why << " at n=" << n << " w=";
                        for (int v : images)
                            os << v << ",";
                        result.counterexample = os.str();
                    }
                };
                if (std::is_sorted(j.begin(), j.end())) {
                    if (adjacent_swap(w, flag, jumps).has_value())
                        record("sorted ordering reported a swap");
                    continue;
                }
                auto i = adjacent_swap(w, flag, jumps);
                if (!i) {
                    record("no swap found for an unsorted ordering");
                    continue;
                }
                auto j_after = flag_jumps(w.compose_transposition(*i), flag, jumps);
                for (int k = 0; k < n; ++k) {
                    long long expect = k == *i - 1 ? j[*i] : k == *i ? j[*i - 1] : j[k];
                    if (j_after[k] != expect) {
                        record("post-swap jumps are not the adjacent transposition");
                        break;
                    }
                }
            }
        }
    }
    return result;
}

SuiteResult suite_kappa_homomorphism(unsigned long long seed)
{
    SuiteResult result{"kappa-homomorphism", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ndist(1, 4);
    std::uniform_int_distribution<long long> psi(-5, 5);
    for (int t = 0; t < 500; ++t) {
        const int n = ndist(rng);
        std::vector<long long> h;
        for (int i = 0; i < n; ++i)
            h.push_back(8 * (n - i));
        std::vector<Rat> vps;
        for (int i = 0; i < n; ++i)
            vps.push_back(Rat(-(i + 1)));
        TriangModule base = nc_module(h, vps);
        auto mk = [&] {
            std::vector<DeformDirection> psis(n);
            for (auto& p : psis)
                p = {Rat(psi(rng)), Rat(psi(rng))};
            return ExtClassModel::make(base, Refinement::identity(n), psis);
        };
        ExtClassModel c1 = mk(), c2 = mk();
        Program program = {{1, "s0", 1}};
        ++result.cases;
        bool ok = true;
        auto k1 = kappa(c1), k2 = kappa(c2), ks = kappa(baer_sum(c1, c2));
        for (size_t i = 0; i < ks.size(); ++i)
            ok = ok && ks[i] == k1[i] + k2[i];
        ok = ok && kappa(pullback_ext(c1, program, ProgramMode::Free)) == k1;
        // eps parts of the deformed Sen polynomial add under Baer sum
        std::vector<DualNum> roots;
        for (int i = 0; i < n; ++i)
            roots.emplace_back(Rat(h[i]), c1.psis[i].wtd + c2.psis[i].wtd);
        ok = ok && sen_poly_deform(baer_sum(c1, c2)) == Poly<DualNum>::from_roots(roots);
        if (!ok) {
            ++result.failures;
            if (result.counterexample.empty())
                result.counterexample = "n=" + std::to_string(n) + " trial " + std::to_string(t);
        }
    }
    return result;
}

SuiteResult suite_dot_identities(unsigned long long seed)
{
    SuiteResult result{"dot-action-identities", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (int n = 1; n <= 5; ++n) {
        Refinement w0 = longest_element(n);
        WeightVec rho = theta_rho(n).second;
        auto perms = all_perms(n);
        std::uniform_int_distribution<size_t> pick(0, perms.size() - 1);
        for (int t = 0; t < 100; ++t) {
            WeightVec xi;
            for (int i = 0; i < n; ++i)
                xi.v.push_back(rand_rat(rng, -9, 9, 3));
            ++result.cases;
            bool ok = dot_action(w0, permute(w0, xi)) == xi - rho - rho;
            Refinement v = Refinement::of(perms[pick(rng)]);
            Refinement w = Refinement::of(perms[pick(rng)]);
            std::vector<int> vw(n);
            for (int i = 0; i < n; ++i)
                vw[i] = v.w[w.w[i] - 1];
            ok = ok && dot_action(Refinement::of(vw), xi) == dot_action(v, dot_action(w, xi));
            ok = ok && bar_dot_action(w, xi + rho) == permute(w, xi) + rho;
            if (!ok) {
                ++result.failures;
                if (result.counterexample.empty())
                    result.counterexample = "n=" + std::to_string(n) + " trial "
                                            + std::to_string(t);
            }
        }
    }
    return result;
}

std::vector<SuiteResult> run_all_suites(unsigned long long seed)
{
    return {
        suite_lattice_uniqueness(seed),
        suite_etale_equivalence(seed + 1),
        suite_commutation(),
        suite_rearrangement(seed + 2),
        suite_kappa_homomorphism(seed + 3),
        suite_dot_identities(seed + 4),
    };
}

}  // namespace twc
