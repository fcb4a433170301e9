#include "twc/json_io.hpp"

namespace twc::io {

namespace {

template <class S>
json poly_json(const Poly<S>& p)
{
    json arr = json::array();
    for (int k = 0; k <= p.degree(); ++k)
        arr.push_back(p.coeff(k).to_string());
    return arr;
}

std::string type_name(const json& j)
{
    return j.type_name();
}

}  // namespace

const json& require_field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw schema_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

int require_int(const json& j, const char* key)
{
    const json& v = require_field(j, key);
    if (!v.is_number_integer())
        throw schema_error(std::string("field '") + key + "' must be an integer, got "
                           + type_name(v));
    return v.get<int>();
}

json to_json(const Rat& r)
{
    return r.to_string();
}

Rat rat_from_json(const json& j)
{
    try {
        if (j.is_number_integer())
            return Rat(j.get<long long>());
        if (j.is_string())
            return Rat::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
    throw schema_error("expected a rational literal, got " + type_name(j));
}

json to_json(const DualNum& d)
{
    return d.to_string();
}

DualNum dual_from_json(const json& j)
{
    try {
        if (j.is_number_integer())
            return DualNum(Rat(j.get<long long>()));
        if (j.is_string())
            return DualNum::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
    throw schema_error("expected a dual-number literal, got " + type_name(j));
}

json to_json(const Poly<Rat>& p)
{
    return poly_json(p);
}

json to_json(const Poly<DualNum>& p)
{
    return poly_json(p);
}

FieldShapePtr field_from_json(const json& j)
{
    FieldShape s;
    s.e = require_int(j, "e");
    s.f = require_int(j, "f");
    const json& embs = require_field(j, "embeddings");
    if (!embs.is_array() || embs.empty())
        throw schema_error("'embeddings' must be a nonempty array");
    for (const auto& e : embs) {
        if (!e.is_string())
            throw schema_error("embedding labels must be strings");
        s.embeddings.push_back(e.get<std::string>());
    }
    if (j.contains("generators")) {
        const json& gens = j.at("generators");
        if (!gens.is_object())
            throw schema_error("'generators' must be an object");
        for (const auto& [name, info] : gens.items()) {
            GenInfo gi;
            if (info.contains("weights"))
                for (const auto& [emb, w] : info.at("weights").items())
                    gi.weights[emb] = rat_from_json(w);
            if (info.contains("uval"))
                gi.uval = rat_from_json(info.at("uval"));
            gi.smooth = info.value("smooth", gi.weights.empty());
            s.generators[name] = std::move(gi);
        }
    }
    try {
        return make_field_shape(std::move(s));
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
}

json to_json(const FieldShape& shape)
{
    json j;
    j["e"] = shape.e;
    j["f"] = shape.f;
    j["embeddings"] = shape.embeddings;
    if (!shape.generators.empty()) {
        json gens = json::object();
        for (const auto& [name, info] : shape.generators) {
            json gi;
            json weights = json::object();
            for (const auto& [emb, w] : info.weights)
                weights[emb] = to_json(w);
            gi["weights"] = weights;
            gi["uval"] = to_json(info.uval);
            gi["smooth"] = info.smooth;
            gens[name] = gi;
        }
        j["generators"] = gens;
    }
    return j;
}

FieldShapePtr collect_inline_generators(FieldShapePtr shape, const json& params)
{
    if (!params.is_array())
        throw schema_error("'params' must be an array");
    FieldShape extended = *shape;
    bool changed = false;
    for (const auto& p : params) {
        if (!p.is_object() || !p.contains("gens"))
            continue;
        if (!p.contains("weights") && !p.contains("uval"))
            continue;
        // inline declaration: exactly one label unknown to the shape
        std::vector<std::string> unknown;
        for (const auto& [label, exp] : p.at("gens").items()) {
            (void)exp;
            bool builtin = label == "EPS_SM" || label == "ABS" || label.rfind("x_", 0) == 0;
            if (!builtin && !extended.generators.count(label))
                unknown.push_back(label);
        }
        if (unknown.empty())
            continue;  // weights/uval are informational on fully-declared literals
        if (unknown.size() > 1)
            throw schema_error(
                "inline weights/uval need exactly one undeclared generator label");
        GenInfo gi;
        if (p.contains("weights"))
            for (const auto& [emb, w] : p.at("weights").items())
                gi.weights[emb] = rat_from_json(w);
        if (p.contains("uval"))
            gi.uval = rat_from_json(p.at("uval"));
        gi.smooth = p.value("smooth", gi.weights.empty());
        extended.generators[unknown.front()] = std::move(gi);
        changed = true;
    }
    if (!changed)
        return shape;
    try {
        return make_field_shape(std::move(extended));
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
}

Character char_from_json(const json& j, const FieldShapePtr& shape)
{
    const json& gens = require_field(j, "gens");
    if (!gens.is_object())
        throw schema_error("'gens' must be an object of label -> exponent");
    Character c = Character::trivial(shape);
    try {
        for (const auto& [label, exp] : gens.items()) {
            if (!exp.is_number_integer())
                throw schema_error("exponent of '" + label + "' must be an integer");
            c = c * Character::generator(shape, label, exp.get<long long>());
        }
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
    return c;
}

json to_json(const Character& c)
{
    json gens = json::object();
    for (const auto& [label, exp] : c.exponents())
        gens[label] = exp;
    json j;
    j["gens"] = gens;
    json weights = json::object();
    for (const auto& emb : c.shape()->embeddings)
        weights[emb] = to_json(c.weight(emb));
    j["weights"] = weights;
    j["uval"] = to_json(c.uval());
    return j;
}

TriangModule module_from_json(const json& j)
{
    FieldShapePtr shape = field_from_json(require_field(j, "field"));
    const json& params_json = require_field(j, "params");
    shape = collect_inline_generators(shape, params_json);
    std::vector<Character> params;
    for (const auto& p : params_json)
        params.push_back(char_from_json(p, shape));

    const size_t n = params.size();
    auto flags_of = [&](const char* key) {
        std::vector<bool> flags(n > 0 ? n - 1 : 0, false);
        if (j.contains(key)) {
            const json& arr = j.at(key);
            if (!arr.is_array() || arr.size() != flags.size())
                throw schema_error(std::string("'") + key + "' must be an array of n-1 booleans");
            for (size_t t = 0; t < flags.size(); ++t) {
                if (!arr[t].is_boolean())
                    throw schema_error(std::string("'") + key + "' entries must be booleans");
                flags[t] = arr[t].get<bool>();
            }
        }
        return flags;
    };
    std::vector<bool> step = flags_of("step_nonsplit");
    std::vector<bool> graded = flags_of("graded_nonsplit");

    ClassTag tag = ClassTag::Plain;
    int mixed_m = 0;
    if (j.contains("class")) {
        const json& cls = j.at("class");
        std::string name;
        if (cls.is_string())
            name = cls.get<std::string>();
        else if (cls.is_object() && cls.contains("mixed"))
            name = "mixed";
        else
            throw schema_error("bad 'class' value");
        if (name == "very_generic_strongly_non_split")
            tag = ClassTag::VeryGenericStronglyNonSplit;
        else if (name == "crystabelline_generic")
            tag = ClassTag::CrystabellineGeneric;
        else if (name == "crystabelline_non_critical")
            tag = ClassTag::CrystabellineNonCritical;
        else if (name == "plain")
            tag = ClassTag::Plain;
        else if (name == "mixed")
            mixed_m = require_int(cls, "mixed"), tag = ClassTag::Mixed;
        else
            throw schema_error("unknown class tag '" + name + "'");
    }
    try {
        return TriangModule::make(std::move(params), std::move(step), std::move(graded), tag,
                                  mixed_m);
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
}

json to_json(const TriangModule& d)
{
    json j;
    j["field"] = to_json(*d.shape());
    json params = json::array();
    for (const auto& p : d.params)
        params.push_back(to_json(p));
    j["params"] = params;
    j["step_nonsplit"] = d.step_nonsplit;
    j["graded_nonsplit"] = d.graded_nonsplit;
    if (d.tag == ClassTag::Mixed)
        j["class"] = json{{"mixed", d.mixed_m}};
    else
        j["class"] = to_string(d.tag);
    json weights = json::object();
    for (const auto& emb : d.shape()->embeddings) {
        json seq = json::array();
        for (const auto& w : d.sigma_weights(emb))
            seq.push_back(to_json(w));
        weights[emb] = seq;
    }
    j["weights"] = weights;
    return j;
}

Program program_from_json(const json& j)
{
    if (!j.is_array())
        throw schema_error("program must be an array of steps");
    Program program;
    for (const auto& step : j) {
        ProgramStep s;
        s.i = require_int(step, "i");
        const json& sigma = require_field(step, "sigma");
        if (!sigma.is_string())
            throw schema_error("'sigma' must be a string");
        s.sigma = sigma.get<std::string>();
        s.mult = step.contains("k") ? require_int(step, "k") : 1;
        program.push_back(std::move(s));
    }
    return program;
}

namespace {

template <class S>
SenLattice<S> lattice_entries(const json& theta, int n, S (*parse)(const json&))
{
    Mat<S> m(n);
    if (!theta.is_array() || static_cast<int>(theta.size()) != n)
        throw schema_error("'theta' must be an n x n array");
    for (int i = 0; i < n; ++i) {
        const json& row = theta[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw schema_error("'theta' must be an n x n array");
        for (int k = 0; k < n; ++k)
            m.at(i, k) = parse(row[k]);
    }
    return SenLattice<S>{m};
}

}  // namespace

LatticeVariant lattice_from_json(const json& j)
{
    int n = require_int(j, "n");
    if (n < 1)
        throw schema_error("'n' must be positive");
    std::string ring = j.value("ring", "rat");
    const json& theta = require_field(j, "theta");
    if (ring == "rat")
        return lattice_entries<Rat>(theta, n, &rat_from_json);
    if (ring == "dual")
        return lattice_entries<DualNum>(theta, n, &dual_from_json);
    throw schema_error("'ring' must be \"rat\" or \"dual\"");
}

json to_json(const SenLattice<Rat>& lat)
{
    json rows = json::array();
    for (int i = 0; i < lat.n(); ++i) {
        json row = json::array();
        for (int k = 0; k < lat.n(); ++k)
            row.push_back(lat.theta.at(i, k).to_string());
        rows.push_back(row);
    }
    return json{{"n", lat.n()}, {"ring", "rat"}, {"theta", rows}};
}

json to_json(const SenLattice<DualNum>& lat)
{
    json rows = json::array();
    for (int i = 0; i < lat.n(); ++i) {
        json row = json::array();
        for (int k = 0; k < lat.n(); ++k)
            row.push_back(lat.theta.at(i, k).to_string());
        rows.push_back(row);
    }
    return json{{"n", lat.n()}, {"ring", "dual"}, {"theta", rows}};
}

CrysModule crys_from_json(const json& j)
{
    FieldShape s;
    if (j.contains("field")) {
        s = *field_from_json(j.at("field"));
    } else {
        s.e = 1;
        s.f = 1;
        s.embeddings = {"s0"};
    }
    const json& phis_json = require_field(j, "phis");
    if (!phis_json.is_array() || phis_json.empty())
        throw schema_error("'phis' must be a nonempty array");
    std::vector<std::string> labels;
    for (const auto& p : phis_json) {
        const json& label = require_field(p, "label");
        if (!label.is_string())
            throw schema_error("'label' must be a string");
        GenInfo gi;
        gi.smooth = true;
        if (p.contains("vp"))
            gi.uval = rat_from_json(p.at("vp"));
        labels.push_back(label.get<std::string>());
        s.generators[labels.back()] = std::move(gi);
    }
    FieldShapePtr shape;
    try {
        shape = make_field_shape(std::move(s));
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
    std::vector<Character> phis;
    for (const auto& label : labels)
        phis.push_back(Character::generator(shape, label));

    std::map<std::string, std::vector<long long>> weights;
    const json& wj = require_field(j, "weights");
    for (const auto& [emb, seq] : wj.items()) {
        if (!seq.is_array())
            throw schema_error("weight sequences must be arrays");
        for (const auto& h : seq) {
            if (!h.is_number_integer())
                throw schema_error("crystabelline weights must be integers");
            weights[emb].push_back(h.get<long long>());
        }
    }
    std::map<std::string, Mat<Rat>> flags;
    const json& fj = require_field(j, "flag");
    for (const auto& [emb, rows] : fj.items()) {
        if (!rows.is_array())
            throw schema_error("flags must be arrays of rows");
        std::vector<std::vector<Rat>> grid;
        for (const auto& row : rows) {
            std::vector<Rat> r;
            for (const auto& v : row)
                r.push_back(rat_from_json(v));
            grid.push_back(std::move(r));
        }
        try {
            flags.emplace(emb, Mat<Rat>::from_rows(grid));
        } catch (const std::invalid_argument& e) {
            throw schema_error(e.what());
        }
    }
    try {
        return CrysModule::make(std::move(phis), std::move(weights), std::move(flags));
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
}

json to_json(const CrysModule& m)
{
    json j;
    j["field"] = to_json(*m.shape());
    json phis = json::array();
    for (const auto& phi : m.phis)
        phis.push_back(json{{"label", phi.to_string()}, {"vp", to_json(phi.uval())}});
    j["phis"] = phis;
    j["weights"] = m.weights;
    json flags = json::object();
    for (const auto& [emb, f] : m.flags) {
        json rows = json::array();
        for (int i = 0; i < f.n(); ++i) {
            json row = json::array();
            for (int k = 0; k < f.n(); ++k)
                row.push_back(to_json(f.at(i, k)));
            rows.push_back(row);
        }
        flags[emb] = rows;
    }
    j["flag"] = flags;
    return j;
}

ExtClassModel ext_class_from_json(const json& j, const TriangModule& base)
{
    const json& wj = require_field(j, "w");
    if (!wj.is_array())
        throw schema_error("'w' must be a permutation array");
    std::vector<int> images;
    for (const auto& v : wj) {
        if (!v.is_number_integer())
            throw schema_error("'w' entries must be integers");
        images.push_back(v.get<int>());
    }
    const json& psis_json = require_field(j, "psis");
    if (!psis_json.is_array())
        throw schema_error("'psis' must be an array");
    std::vector<DeformDirection> psis;
    for (const auto& p : psis_json)
        psis.push_back({rat_from_json(require_field(p, "at_p")),
                        rat_from_json(require_field(p, "wtd"))});
    try {
        return ExtClassModel::make(base, Refinement::of(std::move(images)), std::move(psis));
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
}

json to_json(const SlopeReport& r)
{
    json partials = json::array();
    for (const auto& p : r.partials)
        partials.push_back(to_json(p));
    return json{{"verdict", r.verdict},
                {"partials", partials},
                {"total", to_json(r.total)},
                {"violations", r.violations}};
}

json to_json(const CohProfile& p)
{
    json j{{"h0", p.h0}, {"h1", p.h1}, {"h2", p.h2}};
    if (p.witness)
        j["witness"] = *p.witness;
    else
        j["witness"] = nullptr;
    return j;
}

json to_json(const RegularityFlags& f)
{
    json violations = json::array();
    for (const auto& v : f.violations) {
        json jv{{"i", v.i}, {"j", v.j}, {"condition", v.condition}};
        if (v.sigma)
            jv["sigma"] = *v.sigma;
        violations.push_back(jv);
    }
    return json{{"in_Treg", f.in_Treg},
                {"in_Twreg", f.in_Twreg},
                {"in_Tcirc", f.in_Tcirc},
                {"violations", violations}};
}

json to_json(const GateReport& r)
{
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back(json{{"j", v.j},
                                  {"l", v.l},
                                  {"sigma", v.sigma},
                                  {"difference", to_json(v.weight_difference)}});
    return json{{"ok", r.ok}, {"violations", violations}};
}

json to_json(const WallReport& r)
{
    json hits = json::array();
    for (const auto& h : r.hits)
        hits.push_back(json{{"j", h.j}, {"l", h.l}, {"h", h.h}});
    return json{{"member", r.member}, {"hits", hits}};
}

json to_json(const ProgramWallReport& r)
{
    json hits = json::array();
    for (const auto& h : r.hits)
        hits.push_back(json{{"sigma", h.sigma}, {"j", h.j}, {"k", h.k}, {"shift", h.a}});
    return json{{"member", r.member}, {"hits", hits}};
}

json to_json(const IntertwineReport& r)
{
    json j{{"ok", r.ok},
           {"regular_before", r.regular_before},
           {"regular_after", r.regular_after},
           {"kappa_identity", r.kappa_identity},
           {"diff_consistent", r.diff_consistent},
           {"admissible", r.admissible},
           {"kernel_correspondence", r.kernel_correspondence}};
    if (r.violated_gap)
        j["violated_gap"] = *r.violated_gap;
    if (!r.detail.empty())
        j["detail"] = r.detail;
    return j;
}

json to_json(const PullbackConsistencyReport& r)
{
    json entries = json::array();
    for (const auto& e : r.entries) {
        json weights = json::array();
        for (const auto& w : e.new_weights)
            weights.push_back(to_json(w));
        entries.push_back(json{{"w", e.w},
                               {"Q", to_json(e.q)},
                               {"S", to_json(e.s)},
                               {"new_weights", weights}});
    }
    return json{{"consistent", r.consistent},
                {"weights_match", r.weights_match},
                {"post_regular", r.post_regular},
                {"entries", entries}};
}

json ok_report(json result, std::vector<std::string> provenance)
{
    return json{{"status", "ok"}, {"result", std::move(result)},
                {"provenance", std::move(provenance)}};
}

json error_report(const std::string& code, const std::string& message)
{
    return json{{"status", "error"}, {"code", code}, {"message", message}};
}

}  // namespace twc::io
