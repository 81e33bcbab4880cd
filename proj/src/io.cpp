#include "capalloc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace capalloc {

namespace {

template <typename T>
T get_field(const Json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("field '") + key + "': " + e.what());
    }
}

int get_int(const Json& doc, const char* key) {
    const Json& v = doc.at(key);
    if (!v.is_number_integer()) throw InvalidInput(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

double get_number(const Json& doc, const char* key) {
    const Json& v = doc.at(key);
    if (!v.is_number()) throw InvalidInput(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

void require_keys(const Json& doc, std::initializer_list<const char*> required) {
    for (const char* key : required)
        if (!doc.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
}

void reject_unknown(const Json& doc, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : doc.items())
        if (!allowed.count(key)) throw InvalidInput("unknown field '" + key + "'");
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

ProblemConfig config_from_json(const Json& doc) {
    if (!doc.is_object()) throw InvalidInput("configuration must be an object");
    reject_unknown(doc, {"K", "M", "A", "lambda", "ce", "co", "load", "q", "seed"});
    require_keys(doc, {"K", "M", "A", "lambda", "ce", "co", "load"});
    ProblemConfig c;
    c.K = get_int(doc, "K");
    c.M = get_int(doc, "M");
    c.A = get_int(doc, "A");
    c.lambda = get_number(doc, "lambda");
    c.ce = get_number(doc, "ce");
    c.co = get_number(doc, "co");
    c.load = parse_load(get_field<std::string>(doc, "load"));
    if (doc.contains("q") && !doc.at("q").is_null()) c.q = get_field<std::vector<double>>(doc, "q");
    if (doc.contains("seed") && !doc.at("seed").is_null()) {
        const Json& s = doc.at("seed");
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
            throw InvalidInput("field 'seed' must be a non-negative integer");
        c.seed = doc.at("seed").get<std::uint64_t>();
    }
    c.validate();
    return c;
}

Json to_json(const ProblemConfig& config) {
    Json doc{{"K", config.K},   {"M", config.M},   {"A", config.A},
             {"lambda", config.lambda}, {"ce", config.ce}, {"co", config.co},
             {"load", std::string(to_string(config.load))}};
    if (config.q) doc["q"] = *config.q;
    if (config.seed) doc["seed"] = *config.seed;
    return doc;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

ProblemConfig load_config(const std::filesystem::path& path) {
    return config_from_json(read_json_file(path));
}

Json to_json(const AnyPolicy& policy, const ProblemConfig& config) {
    Json doc{{"K", config.K}, {"M", config.M}, {"A", config.A}};
    if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) {
        doc["kind"] = "threshold";
        doc["thresholds"] = std::vector<int>(t->s.data(), t->s.data() + t->s.size());
    } else {
        doc["kind"] = "tabular";
        Json rows = Json::array();
        for (const Action& y : std::get<TabularPolicy>(policy).actions())
            rows.push_back(std::vector<int>(y.data(), y.data() + y.size()));
        doc["actions"] = std::move(rows);
    }
    return doc;
}

AnyPolicy policy_from_json(const Json& doc, const ProblemConfig& config) {
    if (!doc.is_object()) throw InvalidInput("policy must be an object");
    reject_unknown(doc, {"kind", "K", "M", "A", "thresholds", "actions"});
    require_keys(doc, {"kind", "K", "M", "A"});
    if (get_int(doc, "K") != config.K || get_int(doc, "A") != config.A)
        throw InvalidInput("policy K/A do not match the configuration");
    const auto kind = get_field<std::string>(doc, "kind");
    try {
        if (kind == "threshold") {
            require_keys(doc, {"thresholds"});
            const auto s = get_field<std::vector<int>>(doc, "thresholds");
            ThresholdPolicy policy{Eigen::Map<const Eigen::VectorXi>(s.data(), static_cast<Index>(s.size()))};
            policy.validate(config);
            return policy;
        }
        if (kind == "tabular") {
            require_keys(doc, {"actions"});
            const auto rows = get_field<std::vector<std::vector<int>>>(doc, "actions");
            std::vector<Action> actions;
            actions.reserve(rows.size());
            for (const auto& r : rows)
                actions.push_back(Eigen::Map<const Eigen::VectorXi>(r.data(), static_cast<Index>(r.size())));
            TabularPolicy policy(std::move(actions));
            const StateSpace space = enumerate_states(config);
            if (policy.size() != space.size()) throw InvalidInput("policy table has the wrong number of states");
            for (Index i = 0; i < policy.size(); ++i)
                if (policy[i].size() != config.K) throw InvalidInput("policy action has the wrong length");
            policy.validate(space, config);
            return policy;
        }
    } catch (const ContractViolation& e) {
        throw InvalidInput(std::string("policy: ") + e.what());
    }
    throw InvalidInput("policy kind must be 'tabular' or 'threshold'");
}

AnyPolicy load_policy(const std::filesystem::path& path, const ProblemConfig& config) {
    return policy_from_json(read_json_file(path), config);
}

Json to_json(const Evaluation& evaluation, bool include_bias) {
    Json doc{{"g", evaluation.g},
             {"reference_state", StateSpace::empty_index()},
             {"residual", evaluation.residual}};
    if (include_bias)
        doc["h"] = std::vector<double>(evaluation.h.data(), evaluation.h.data() + evaluation.h.size());
    return doc;
}

Json to_json(const CheckReport& report) {
    Json violations = Json::array();
    for (const Violation& v : report.violations)
        violations.push_back({{"state", std::vector<int>(v.state.data(), v.state.data() + v.state.size())},
                              {"observed", number_or_null(v.observed)},
                              {"expected", number_or_null(v.expected)},
                              {"detail", v.detail}});
    return {{"check", report.check},
            {"instance", report.instance},
            {"passed", report.passed()},
            {"violations", std::move(violations)},
            {"note", report.note}};
}

Json to_json(const SimResult& r) {
    return {{"mean_cost", r.mean_cost},      {"std_error", number_or_null(r.std_error)},
            {"horizon", r.horizon},          {"warmup", r.warmup},
            {"replications", r.replications}, {"seed", r.seed}};
}

std::string sim_csv_header() { return "mean_cost,std_error,horizon,warmup,replications,seed"; }

std::string sim_csv_row(const SimResult& r) {
    std::ostringstream os;
    os << std::setprecision(10) << r.mean_cost << ',';
    if (std::isfinite(r.std_error))
        os << r.std_error;
    else
        os << "nan";
    os << ',' << r.horizon << ',' << r.warmup << ',' << r.replications << ',' << r.seed;
    return os.str();
}

}  // namespace capalloc
