#include "twc/json_io.hpp"
#include "twc/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

using json = nlohmann::json;
using namespace twc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitSchema = 2;
constexpr int kExitGate = 3;
constexpr int kExitSuite = 4;

struct Options {
    std::string format = "json";
    std::string input;
    unsigned long long seed = 0;
};

json read_payload(const Options& opt)
{
    std::string text;
    if (opt.input.empty() || opt.input == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(opt.input);
        if (!in)
            throw io::schema_error("cannot open input file '" + opt.input + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw io::schema_error("payload is not valid JSON");
    return j;
}

void flatten(const json& j, const std::string& prefix, std::ostream& os)
{
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, os);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
        if (j.empty())
            os << prefix << ": []\n";
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

void emit(const json& report, const Options& opt)
{
    if (opt.format == "text")
        flatten(report, "", std::cout);
    else
        std::cout << report.dump(2) << "\n";
}

ProgramMode mode_from(const json& payload)
{
    std::string mode = payload.value("mode", "strict");
    if (mode == "free")
        return ProgramMode::Free;
    if (mode == "strict")
        return ProgramMode::Strict;
    if (mode == "substack")
        return ProgramMode::Substack;
    throw io::schema_error("'mode' must be one of free, strict, substack");
}

json cmd_classify(const json& payload)
{
    FieldShapePtr shape = io::field_from_json(io::require_field(payload, "field"));
    const json& chars_json = io::require_field(payload, "chars");
    shape = io::collect_inline_generators(shape, chars_json);
    std::vector<Character> chars;
    for (const auto& c : chars_json)
        chars.push_back(io::char_from_json(c, shape));
    if (chars.empty())
        throw io::schema_error("'chars' must be nonempty");

    json profiles = json::array();
    for (const auto& c : chars)
        profiles.push_back(io::to_json(classify_rank1(c)));
    json result{{"profiles", profiles}};
    std::vector<std::string> provenance{"cohomology:rank-one-dimensions"};
    if (chars.size() > 1) {
        result["tuple"] = io::to_json(tuple_regularity(chars));
        provenance.push_back("regularity:ratio-table");
    }
    return io::ok_report(result, provenance);
}

json cmd_pullback(const json& payload)
{
    std::vector<json> module_specs;
    if (payload.contains("modules"))
        for (const auto& m : payload.at("modules"))
            module_specs.push_back(m);
    else
        module_specs.push_back(io::require_field(payload, "module"));
    Program program = io::program_from_json(io::require_field(payload, "program"));
    ProgramMode mode = mode_from(payload);

    json results = json::array();
    for (const auto& spec : module_specs) {
        TriangModule d = io::module_from_json(spec);
        TriangModule out = apply_program(d, program, mode);
        results.push_back(io::to_json(out));
    }
    std::vector<std::string> provenance{"pullback:last-i-weight-raise"};
    if (mode == ProgramMode::Strict)
        provenance.push_back("gate:weight-difference-window");
    if (mode == ProgramMode::Substack)
        provenance.push_back("wall:shift-schedule");
    return io::ok_report(json{{"results", results}}, provenance);
}

std::map<std::string, std::vector<Rat>> weights_by_sigma(const json& payload)
{
    std::map<std::string, std::vector<Rat>> weights;
    if (payload.contains("module")) {
        TriangModule d = io::module_from_json(payload.at("module"));
        for (const auto& emb : d.shape()->embeddings)
            weights[emb] = d.sigma_weights(emb);
    } else {
        const json& w = io::require_field(payload, "weights");
        for (const auto& [emb, seq] : w.items())
            for (const auto& v : seq)
                weights[emb].push_back(io::rat_from_json(v));
    }
    return weights;
}

json cmd_walls(const json& payload)
{
    auto weights = weights_by_sigma(payload);
    if (payload.contains("interval")) {
        const json& window = payload.at("interval");
        if (!window.is_array() || window.size() != 2 || !window[0].is_number_integer()
            || !window[1].is_number_integer())
            throw io::schema_error("'interval' must be [a, b] with integers a <= 0 <= b");
        std::string sigma = io::require_field(payload, "sigma").get<std::string>();
        int i = io::require_int(payload, "i");
        if (!weights.count(sigma))
            throw io::schema_error("no weights for embedding '" + sigma + "'");
        WallInterval wi;
        try {
            wi = WallInterval(window[0].get<long long>(), window[1].get<long long>());
        } catch (const std::invalid_argument& e) {
            throw io::schema_error(e.what());
        }
        auto report = wall_member(weights.at(sigma), i, wi);
        return io::ok_report(io::to_json(report), {"wall:sen-weight-interval"});
    }
    // program form
    std::set<std::string> s_set;
    for (const auto& s : io::require_field(payload, "S"))
        s_set.insert(s.get<std::string>());
    std::map<std::string, std::vector<int>> i_sets;
    for (const auto& [emb, arr] : io::require_field(payload, "I").items())
        for (const auto& v : arr)
            i_sets[emb].push_back(v.get<int>());
    std::map<std::string, std::vector<long long>> mults;
    for (const auto& [emb, arr] : io::require_field(payload, "k").items())
        for (const auto& v : arr)
            mults[emb].push_back(v.get<long long>());
    bool negative = payload.value("sign", "plus") == "minus";
    try {
        auto report = wall_member_program(weights, s_set, i_sets, mults, negative);
        return io::ok_report(io::to_json(report), {"wall:shift-schedule"});
    } catch (const std::invalid_argument& e) {
        throw io::schema_error(e.what());
    }
}

json cmd_etale(const json& payload)
{
    std::string kind = io::require_field(payload, "kind").get<std::string>();
    if (kind == "vgen") {
        TriangModule d = io::module_from_json(io::require_field(payload, "module"));
        return io::ok_report(io::to_json(etale_vgen(d)), {"slope:prefix-degree-criterion"});
    }
    if (kind == "vgen_pullback") {
        TriangModule d = io::module_from_json(io::require_field(payload, "module"));
        int j = io::require_int(payload, "j");
        std::string sigma = io::require_field(payload, "sigma").get<std::string>();
        auto r = etale_pullback_vgen(d, j, sigma);
        json out{{"feasible", r.feasible},
                 {"chi_uval", io::to_json(r.chi_uval)},
                 {"violations", r.violations}};
        return io::ok_report(out, {"slope:prefix-degree-criterion",
                                   "slope:unramified-twist-balance"});
    }
    if (kind == "crys") {
        CrysModule m = io::crys_from_json(io::require_field(payload, "crys"));
        return io::ok_report(io::to_json(etale_crys(m)), {"slope:sorted-valuation-prefixes"});
    }
    if (kind == "crys_oracle") {
        CrysModule m = io::crys_from_json(io::require_field(payload, "crys"));
        auto r = brute_force_etale(m);
        json out{{"report", io::to_json(r.report)}, {"agrees", r.agrees}};
        if (r.negative_witness)
            out["negative_witness"] =
                json{{"w", r.negative_witness->first}, {"prefix", r.negative_witness->second}};
        return io::ok_report(out, {"slope:refinement-enumeration-oracle"});
    }
    if (kind == "twist") {
        Program program = io::program_from_json(io::require_field(payload, "program"));
        std::optional<Rat> chi;
        if (payload.contains("crys"))
            chi = twist_to_etale(io::crys_from_json(payload.at("crys")), program);
        else
            chi = twist_to_etale(io::module_from_json(io::require_field(payload, "module")),
                                 program);
        json out;
        out["feasible"] = chi.has_value();
        out["chi_uval"] = chi ? io::to_json(*chi) : json(nullptr);
        return io::ok_report(out, {"slope:unramified-twist-balance"});
    }
    throw io::schema_error("unknown etale kind '" + kind + "'");
}

template <class S>
json modify_lattice_on(const SenLattice<S>& lat, const json& payload)
{
    const json& roots_json = io::require_field(payload, "roots");
    std::vector<S> roots;
    for (const auto& r : roots_json) {
        if constexpr (std::is_same_v<S, Rat>)
            roots.push_back(io::rat_from_json(r));
        else
            roots.push_back(io::dual_from_json(r));
    }
    std::set<int> index_set;
    for (const auto& i : io::require_field(payload, "I"))
        index_set.insert(i.get<int>());
    std::string direction = payload.value("direction", "down");
    if (direction != "down" && direction != "up")
        throw io::schema_error("'direction' must be down or up");

    auto f = split_sen_poly(lat, roots, index_set);
    auto modified = direction == "down" ? modify_down(lat, f) : modify_up(lat, f);
    json w_basis = json::array();
    for (const auto& vec : modified.w_basis) {
        json v = json::array();
        for (const auto& x : vec)
            v.push_back(x.to_string());
        w_basis.push_back(v);
    }
    json result{{"sen_poly_before", io::to_json(charpoly(lat.theta))},
                {"sen_poly_after", io::to_json(charpoly(modified.lattice.theta))},
                {"Q", io::to_json(f.q)},
                {"S", io::to_json(f.s)},
                {"lattice_after", io::to_json(modified.lattice)},
                {"w_basis", w_basis},
                {"roundtrip_invertible", roundtrip_invertible(f)}};

    if (payload.value("oracle", false)) {
        if constexpr (std::is_same_v<S, Rat>) {
            Poly<Rat> target = direction == "down" ? f.q.shift_arg(Rat(-1)) * f.s
                                                   : f.q.shift_arg(Rat(1)) * f.s;
            auto oracle = brute_force_modifications(lat, target);
            json subspaces = json::array();
            for (const auto& sub : oracle.subspaces) {
                json basis = json::array();
                for (const auto& vec : sub) {
                    json v = json::array();
                    for (const auto& x : vec)
                        v.push_back(x.to_string());
                    basis.push_back(v);
                }
                subspaces.push_back(basis);
            }
            result["oracle"] = json{{"count", oracle.subspaces.size()},
                                    {"exhaustive", oracle.exhaustive},
                                    {"subspaces", subspaces}};
        } else {
            throw io::schema_error("the enumeration oracle runs over the rationals only");
        }
    }
    return result;
}

json cmd_modify_lattice(const json& payload)
{
    auto lat = io::lattice_from_json(io::require_field(payload, "lattice"));
    json result = std::visit([&](const auto& l) { return modify_lattice_on(l, payload); }, lat);
    std::vector<std::string> provenance{"lattice:comaximal-sen-factorization",
                                        "lattice:crt-projector-modification",
                                        "lattice:inverse-gap-guard"};
    if (payload.value("oracle", false))
        provenance.push_back("lattice:stable-subspace-enumeration");
    return io::ok_report(result, provenance);
}

json cmd_refinements(const json& payload)
{
    CrysModule m = io::crys_from_json(io::require_field(payload, "crys"));
    std::string sigma = payload.value("sigma", m.shape()->embeddings.front());
    if (!m.weights.count(sigma))
        throw io::schema_error("no weights for embedding '" + sigma + "'");

    std::vector<Refinement> refinements;
    if (payload.contains("w")) {
        std::vector<int> images;
        for (const auto& v : payload.at("w"))
            images.push_back(v.get<int>());
        try {
            refinements.push_back(Refinement::of(images));
        } catch (const std::invalid_argument& e) {
            throw io::schema_error(e.what());
        }
    } else {
        if (m.n() > 5)
            throw io::schema_error("enumerating all refinements needs n <= 5; pass 'w'");
        std::vector<int> base(m.n());
        std::iota(base.begin(), base.end(), 1);
        do {
            refinements.push_back(Refinement::of(base));
        } while (std::next_permutation(base.begin(), base.end()));
    }

    const auto& h = m.weights.at(sigma);
    std::vector<long long> jumps(h.size());
    for (size_t i = 0; i < h.size(); ++i)
        jumps[i] = -h[i];

    json result;
    GenericCheck generic = generic_check(m.phis);
    result["generic"] = json{{"ok", generic.ok}};
    if (generic.violating_pair)
        result["generic"]["pair"] =
            json::array({generic.violating_pair->first, generic.violating_pair->second});
    if (!generic.reason.empty())
        result["generic"]["reason"] = generic.reason;

    json entries = json::array();
    for (const auto& w : refinements) {
        json entry{{"w", w.w}};
        entry["jumps"] = flag_jumps(w, m.flags.at(sigma), jumps);
        entry["noncritical"] = noncritical_check(m, w, sigma);
        auto swap = adjacent_swap(w, m.flags.at(sigma), jumps);
        entry["adjacent_swap"] = swap ? json(*swap) : json(nullptr);
        auto witness = critical_split_witness(m, w, sigma);
        entry["critical_split_witness"] =
            witness ? json{{"i", witness->first}, {"w_prime", witness->second.w}}
                    : json(nullptr);
        entries.push_back(entry);
    }
    result["refinements"] = entries;
    return io::ok_report(result, {"refinement:formal-genericity",
                                  "refinement:flag-jump-ordering",
                                  "refinement:adjacent-swap-rearrangement"});
}

json cmd_deform(const json& payload)
{
    TriangModule base = io::module_from_json(io::require_field(payload, "module"));
    ExtClassModel c = io::ext_class_from_json(io::require_field(payload, "class"), base);

    json result;
    json kap = json::array();
    for (const auto& x : kappa(c))
        kap.push_back(x.to_string());
    result["kappa"] = kap;
    result["sen_poly"] = io::to_json(sen_poly_deform(c));

    std::vector<std::string> provenance{"deform:kappa-coordinates"};
    if (payload.contains("other")) {
        ExtClassModel other = io::ext_class_from_json(payload.at("other"), base);
        ExtClassModel sum = baer_sum(c, other);
        json ksum = json::array();
        for (const auto& x : kappa(sum))
            ksum.push_back(x.to_string());
        result["baer_sum"] =
            json{{"kappa", ksum}, {"sen_poly", io::to_json(sen_poly_deform(sum))}};
        provenance.push_back("deform:baer-sum");
    }
    if (payload.contains("program")) {
        Program program = io::program_from_json(payload.at("program"));
        ExtClassModel moved = pullback_ext(c, program, mode_from(payload));
        json kmoved = json::array();
        for (const auto& x : kappa(moved))
            kmoved.push_back(x.to_string());
        result["after_pullback"] = json{{"kappa", kmoved},
                                        {"module", io::to_json(moved.base)},
                                        {"kappa_unchanged", kappa(moved) == kappa(c)}};
        provenance.push_back("deform:pullback-kappa-identity");
    }
    return io::ok_report(result, provenance);
}

json cmd_translate(const json& payload, unsigned long long seed)
{
    TriangModule d = io::module_from_json(io::require_field(payload, "module"));
    Program program = io::program_from_json(io::require_field(payload, "program"));
    const int n = d.n();

    std::vector<long long> mult(n, 0);
    for (const auto& step : program) {
        if (step.i < 1 || step.i > n)
            throw io::schema_error("program index out of range");
        mult[step.i - 1] += step.mult;
    }
    auto [theta, rho] = theta_rho(n);
    json result;
    json jtheta = json::array(), jrho = json::array();
    for (int i = 0; i < n; ++i) {
        jtheta.push_back(theta.v[i].to_string());
        jrho.push_back(rho.v[i].to_string());
    }
    result["theta"] = jtheta;
    result["rho"] = jrho;
    WeightVec diff = translation_diff(mult);
    json jdiff = json::array();
    for (const auto& x : diff.v)
        jdiff.push_back(x.to_string());
    result["translation_diff"] = jdiff;

    const std::string& sigma = d.shape()->embeddings.front();
    WeightVec lambda{d.sigma_weights(sigma)};
    lambda = lambda - theta;
    TriangModule after = apply_program(d, program, ProgramMode::Free);
    WeightVec lambda_prime{after.sigma_weights(sigma)};
    lambda_prime = lambda_prime - theta;
    json jlam = json::array(), jlamp = json::array();
    for (int i = 0; i < n; ++i) {
        jlam.push_back(lambda.v[i].to_string());
        jlamp.push_back(lambda_prime.v[i].to_string());
    }
    result["lambda"] = jlam;
    result["lambda_prime"] = jlamp;

    AdmissibilityReport adm = translation_admissible(lambda + rho, lambda_prime + rho);
    result["admissible"] = json{{"ok", adm.ok}, {"reasons", adm.reasons}};
    result["intertwine"] = io::to_json(intertwine_check(d, program, seed));
    return io::ok_report(result, {"translate:weight-difference-vector",
                                  "translate:chamber-admissibility",
                                  "translate:kappa-front-face"});
}

int cmd_verify(const std::vector<std::string>& suites, const Options& opt)
{
    std::vector<SuiteResult> results;
    auto want = [&](const std::string& name) {
        if (suites.empty())
            return true;
        for (const auto& s : suites)
            if (s == "all" || s == name)
                return true;
        return false;
    };
    if (want("lattice-uniqueness"))
        results.push_back(suite_lattice_uniqueness(opt.seed));
    if (want("etale-oracle-equivalence"))
        results.push_back(suite_etale_equivalence(opt.seed + 1));
    if (want("pullback-commutation"))
        results.push_back(suite_commutation());
    if (want("flag-rearrangement"))
        results.push_back(suite_rearrangement(opt.seed + 2));
    if (want("kappa-homomorphism"))
        results.push_back(suite_kappa_homomorphism(opt.seed + 3));
    if (want("dot-action-identities"))
        results.push_back(suite_dot_identities(opt.seed + 4));
    if (results.empty())
        throw io::schema_error("no such suite");

    bool all_ok = true;
    json out = json::array();
    for (const auto& r : results) {
        all_ok = all_ok && r.ok();
        json entry{{"name", r.name}, {"cases", r.cases}, {"failures", r.failures}};
        if (!r.counterexample.empty())
            entry["counterexample"] = r.counterexample;
        out.push_back(entry);
    }
    json report = json{{"status", all_ok ? "ok" : "error"},
                       {"result", json{{"suites", out}}},
                       {"seed", opt.seed}};
    if (opt.format == "text") {
        for (const auto& r : results)
            std::cout << (r.ok() ? "pass" : "FAIL") << " " << r.name << " (" << r.cases
                      << " cases, " << r.failures << " failures)\n";
    } else {
        std::cout << report.dump(2) << "\n";
    }
    return all_ok ? kExitOk : kExitSuite;
}

int dispatch(const std::string& name, const Options& opt)
{
    json payload = read_payload(opt);
    json report;
    if (name == "classify")
        report = cmd_classify(payload);
    else if (name == "pullback")
        report = cmd_pullback(payload);
    else if (name == "walls")
        report = cmd_walls(payload);
    else if (name == "etale")
        report = cmd_etale(payload);
    else if (name == "modify-lattice")
        report = cmd_modify_lattice(payload);
    else if (name == "refinements")
        report = cmd_refinements(payload);
    else if (name == "deform")
        report = cmd_deform(payload);
    else if (name == "translate")
        report = cmd_translate(payload, opt.seed);
    else
        throw std::logic_error("unknown command");
    emit(report, opt);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact change-of-weights calculus for trianguline parameter data"};
    app.require_subcommand(1);

    Options opt;
    std::vector<std::string> suites;
    const std::vector<std::string> commands = {
        "classify", "pullback", "walls",  "etale",
        "modify-lattice", "refinements", "deform", "translate"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", opt.input, "payload file (default: stdin)");
        sub->add_option("--format", opt.format, "json or text")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--seed", opt.seed, "seed for randomized sub-checks");
    }
    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("--suite", suites, "suite name or 'all' (repeatable)");
    verify->add_option("--seed", opt.seed, "seed for randomized suites");
    verify->add_option("--format", opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* chosen = app.get_subcommands().front();
        if (chosen->get_name() == "verify")
            return cmd_verify(suites, opt);
        return dispatch(chosen->get_name(), opt);
    } catch (const io::schema_error& e) {
        std::cout << io::error_report("schema", e.what()).dump(2) << "\n";
        return kExitSchema;
    } catch (const gate_error& e) {
        std::cout << io::error_report(std::string("gate:") + e.code(), e.what()).dump(2) << "\n";
        return kExitGate;
    } catch (const std::invalid_argument& e) {
        std::cout << io::error_report("precondition", e.what()).dump(2) << "\n";
        return kExitGate;
    } catch (const std::domain_error& e) {
        std::cout << io::error_report("precondition", e.what()).dump(2) << "\n";
        return kExitGate;
    } catch (const std::exception& e) {
        std::cout << io::error_report("internal", e.what()).dump(2) << "\n";
        return kExitError;
    }
}
