#include "kbdecay/config.hpp"

#include "kbdecay/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace kbdecay {

using nlohmann::json;

namespace {

void reject_unknown(const json &j, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
    if (!j.is_object())
        throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto &[key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed)
            known = known || key == a;
        if (!known)
            throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

double number(const json &j, std::string_view where) {
    if (!j.is_number())
        throw ConfigError(std::string(where) + " must be a number");
    return j.get<double>();
}

double number_or(const json &j, const char *key, double fallback,
                 std::string_view where) {
    if (!j.contains(key))
        return fallback;
    return number(j.at(key), std::string(where) + "." + key);
}

std::uint64_t unsigned_or(const json &j, const char *key, std::uint64_t fallback,
                          std::string_view where) {
    if (!j.contains(key))
        return fallback;
    const auto &v = j.at(key);
    const bool ok = v.is_number_unsigned() ||
                    (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    if (!ok)
        throw ConfigError(std::string(where) + "." + key +
                          " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

Interval interval_from(const json &j, std::string_view where) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(std::string(where) + " must be a [low, high] pair");
    return {number(j[0], where), number(j[1], where)};
}

ExperimentConfig base_config(OscillatorModel model) {
    return ExperimentConfig(std::move(model));
}

} // namespace

void ExperimentConfig::validate() const {
    if (!(ic_interval.low > 0.0) || !(ic_interval.low < ic_interval.high))
        throw ConfigError("ic_interval must satisfy 0 < low < high");
    if (ic_count < 1)
        throw ConfigError("ic_count must be at least 1");
    if (candidates.empty())
        throw ConfigError("fit.candidates must not be empty");
    for (int n : candidates)
        if (n < 1)
            throw ConfigError("fit.candidates must be positive integers");
    try {
        integrator.validate();
        window.validate();
    } catch (const InvalidParameter &e) {
        throw ConfigError(e.what());
    }
    if (!(window.t_start < integrator.t_end))
        throw ConfigError("fit window starts after integrator.t_end");
}

json model_to_json(const OscillatorModel &model) {
    json j;
    j["class"] = std::string(to_string(model.damping_class()));
    if (auto named = model.named()) {
        j["a"] = named->a;
        j["alpha"] = named->alpha;
        j["beta"] = named->beta;
        j["gamma"] = named->gamma;
        j["delta"] = named->delta;
    } else {
        json coeffs = json::array();
        for (const auto &c : model.coeffs())
            coeffs.push_back(to_string(c));
        j["coeffs"] = coeffs;
    }
    j["epsilon"] = model.epsilon();
    j["omega"] = model.omega();
    return j;
}

OscillatorModel model_from_json(const json &j) {
    reject_unknown(j, "model",
                   {"class", "a", "alpha", "beta", "gamma", "delta", "coeffs",
                    "epsilon", "omega"});
    if (!j.contains("class") || !j.at("class").is_string())
        throw ConfigError("model.class must be \"vdp\" or \"rayleigh\"");
    try {
        const DampingClass cls = parse_damping_class(j.at("class").get<std::string>());
        const double eps = number_or(j, "epsilon", 0.1, "model");
        const double omega = number_or(j, "omega", 1.0, "model");
        if (j.contains("coeffs")) {
            for (const char *k : {"a", "alpha", "beta", "gamma", "delta"})
                if (j.contains(k))
                    throw ConfigError(std::string("model.coeffs cannot be combined with model.") + k);
            const auto &list = j.at("coeffs");
            if (!list.is_array() || list.size() > kMaxCoeffs)
                throw ConfigError("model.coeffs must be a list of at most 6 entries");
            CoeffArray coeffs;
            for (std::size_t k = 0; k < list.size(); ++k) {
                if (list[k].is_string())
                    coeffs[k] = parse_rational(list[k].get<std::string>());
                else
                    coeffs[k] = rational_from_double(number(list[k], "model.coeffs"));
            }
            return OscillatorModel(cls, coeffs, eps, omega);
        }
        NamedParameters p;
        p.a = number_or(j, "a", 0.0, "model");
        p.alpha = number_or(j, "alpha", 0.0, "model");
        p.beta = number_or(j, "beta", 0.0, "model");
        p.gamma = number_or(j, "gamma", 0.0, "model");
        p.delta = number_or(j, "delta", 0.0, "model");
        return make_model(cls, p, eps, omega);
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        throw ConfigError(e.what());
    }
}

json config_to_json(const ExperimentConfig &c) {
    json j;
    j["model"] = model_to_json(c.model);
    j["ic_interval"] = {c.ic_interval.low, c.ic_interval.high};
    j["ic_count"] = c.ic_count;
    j["seed"] = c.seed;
    json integ;
    integ["rtol"] = c.integrator.rtol;
    integ["atol"] = c.integrator.atol;
    integ["t_end"] = c.integrator.t_end;
    integ["samples"] = c.integrator.samples;
    integ["r_max"] = c.integrator.r_max ? json(*c.integrator.r_max) : json(nullptr);
    integ["max_steps"] = c.integrator.max_steps;
    j["integrator"] = integ;
    j["fit"] = {{"window", {c.window.t_start, c.window.t_end}},
                {"candidates", c.candidates}};
    j["output_dir"] = c.output_dir;
    j["full"] = c.full;
    return j;
}

ExperimentConfig config_from_json(const json &j) {
    reject_unknown(j, "config",
                   {"model", "ic_interval", "ic_count", "seed", "integrator", "fit",
                    "output_dir", "full"});
    if (!j.contains("model"))
        throw ConfigError("config needs a model block");
    ExperimentConfig c = base_config(model_from_json(j.at("model")));
    if (j.contains("ic_interval"))
        c.ic_interval = interval_from(j.at("ic_interval"), "ic_interval");
    c.ic_count = unsigned_or(j, "ic_count", c.ic_count, "config");
    c.seed = unsigned_or(j, "seed", c.seed, "config");
    if (j.contains("integrator")) {
        const auto &integ = j.at("integrator");
        reject_unknown(integ, "integrator",
                       {"rtol", "atol", "t_end", "samples", "r_max", "max_steps"});
        auto &s = c.integrator;
        s.rtol = number_or(integ, "rtol", s.rtol, "integrator");
        s.atol = number_or(integ, "atol", s.atol, "integrator");
        s.t_end = number_or(integ, "t_end", s.t_end, "integrator");
        s.samples = unsigned_or(integ, "samples", s.samples, "integrator");
        s.max_steps = unsigned_or(integ, "max_steps", s.max_steps, "integrator");
        if (integ.contains("r_max") && !integ.at("r_max").is_null())
            s.r_max = number(integ.at("r_max"), "integrator.r_max");
    }
    if (j.contains("fit")) {
        const auto &fit = j.at("fit");
        reject_unknown(fit, "fit", {"window", "candidates"});
        if (fit.contains("window")) {
            const Interval w = interval_from(fit.at("window"), "fit.window");
            c.window = {w.low, w.high};
        }
        if (fit.contains("candidates")) {
            const auto &list = fit.at("candidates");
            if (!list.is_array())
                throw ConfigError("fit.candidates must be a list of integers");
            c.candidates.clear();
            for (const auto &v : list) {
                if (!v.is_number_integer())
                    throw ConfigError("fit.candidates must be a list of integers");
                c.candidates.push_back(v.get<int>());
            }
        }
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            throw ConfigError("output_dir must be a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("full")) {
        if (!j.at("full").is_boolean())
            throw ConfigError("full must be true or false");
        c.full = j.at("full").get<bool>();
    }
    c.validate();
    return c;
}

const std::vector<std::string> &preset_names() {
    static const std::vector<std::string> names{"vdp-mono", "vdp-bi",
                                                "rayleigh-mono", "rayleigh-bi"};
    return names;
}

ExperimentConfig preset_config(std::string_view name) {
    constexpr double eps = 0.1;
    auto make = [&](OscillatorModel model, Interval ics) {
        ExperimentConfig c = base_config(std::move(model));
        c.ic_interval = ics;
        c.output_dir = "kbdecay-out/" + std::string(name);
        return c;
    };
    if (name == "vdp-mono")
        return make(make_vdp(0, 0, 0, 0, 0, eps, 1), {2.4, 4.91});
    if (name == "vdp-bi")
        return make(make_vdp(0, 0.144, 0.005, 0, 0, eps, 1), {2.4, 4.91});
    if (name == "rayleigh-mono")
        return make(make_rayleigh(0, 0, 0, 0, 0, eps, 1), {1.5, 2.6});
    if (name == "rayleigh-bi")
        return make(make_rayleigh(0, 0.285272, 0.0244993, 0, 0, eps, 1), {1.5, 2.6});
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig load_config(const std::string &name_or_path) {
    for (const auto &p : preset_names())
        if (p == name_or_path)
            return preset_config(p);
    std::ifstream in(name_or_path);
    if (!in)
        throw ConfigError("cannot open config '" + name_or_path +
                          "' (not a file or preset name)");
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("malformed JSON in '" + name_or_path + "': " + e.what());
    }
    return config_from_json(j);
}

std::string config_help() {
    std::ostringstream out;
    out << "CONFIG is a preset name (vdp-mono, vdp-bi, rayleigh-mono, rayleigh-bi)\n"
           "or a JSON file. Unknown keys are rejected. Keys and defaults:\n"
           "  model.class          \"vdp\" (damping in x) or \"rayleigh\" (damping in x'); required\n"
           "  model.a, alpha, beta, gamma, delta\n"
           "                       damping -a^2 + s^2 - alpha s^4 + beta s^6 - gamma s^8 + delta s^10; default 0\n"
           "  model.coeffs         alternative to the named form: up to 6 entries c_k of g(s)=sum c_k s^(2k),\n"
           "                       as numbers or \"p/q\" strings\n"
           "  model.epsilon        nonlinearity strength in (0,1); default 0.1\n"
           "  model.omega          angular frequency > 0; default 1\n"
           "  ic_interval          [low, high] for random r0; default [2.4, 4.91]\n"
           "  ic_count             number of random r0; default 1000\n"
           "  seed                 64-bit RNG seed; default 42\n"
           "  integrator.rtol      default 1e-9\n"
           "  integrator.atol      default 1e-12\n"
           "  integrator.t_end     default 500\n"
           "  integrator.samples   uniform output points on [0, t_end]; default 2000\n"
           "  integrator.r_max     divergence bound; default 10*max(r0, largest cycle, 1)\n"
           "  integrator.max_steps default 10000000\n"
           "  fit.window           [t_start, t_end]; default [1, 500]\n"
           "  fit.candidates       power-law indices n; default [1,2,3,4,5,6]\n"
           "  output_dir           default \"kbdecay-out\" (env KBDECAY_OUTPUT_DIR overrides)\n"
           "  full                 fit the full-oscillator envelope; default false\n";
    return out.str();
}

} // namespace kbdecay
