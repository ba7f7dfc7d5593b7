#include "fkswitch/config.hpp"

#include "fkswitch/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace fkswitch {

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, KeyValue>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& what) {
    throw_config("ConfigParse", source + ":" + std::to_string(line) + ": " + what);
}

Document read_document(std::istream& in, const std::string& source) {
    Document doc;
    std::string current;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') parse_fail(source, line, "unterminated section header");
            current = lower(trim(text.substr(1, text.size() - 2)));
            if (current.empty()) parse_fail(source, line, "empty section name");
            doc[current];
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) parse_fail(source, line, "expected key = value");
        if (current.empty()) parse_fail(source, line, "key outside any section");
        const std::string key = lower(trim(text.substr(0, eq)));
        if (key.empty()) parse_fail(source, line, "empty key");
        doc[current][key] = {trim(text.substr(eq + 1)), line};
    }
    return doc;
}

double parse_double(const std::string& source, int line, const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        parse_fail(source, line, "cannot parse number '" + text + "'");
    }
    return value;
}

long long parse_integer(const std::string& source, int line, const std::string& text) {
    long long value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        parse_fail(source, line, "cannot parse integer '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& source, int line, const std::string& text) {
    const std::string v = lower(text);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    parse_fail(source, line, "cannot parse boolean '" + text + "'");
}

std::vector<double> parse_list(const std::string& source, int line, const std::string& text) {
    std::vector<double> values;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const std::string trimmed = trim(item);
        if (trimmed.empty()) parse_fail(source, line, "empty list entry");
        values.push_back(parse_double(source, line, trimmed));
    }
    if (values.empty()) parse_fail(source, line, "empty list");
    return values;
}

class SectionReader {
public:
    SectionReader(const Document& doc, const std::string& source, const std::string& name)
        : source_(source), name_(name) {
        const auto it = doc.find(name);
        section_ = (it == doc.end()) ? nullptr : &it->second;
    }

    bool exists() const { return section_ != nullptr; }

    const KeyValue* find(const std::string& key) const {
        if (!section_) return nullptr;
        const auto it = section_->find(key);
        return it == section_->end() ? nullptr : &it->second;
    }

    const KeyValue& require(const std::string& key) const {
        const KeyValue* kv = find(key);
        if (!kv) {
            throw_config("ConfigParse",
                         source_ + ": missing key '" + key + "' in section [" + name_ + "]");
        }
        return *kv;
    }

    double require_double(const std::string& key) const {
        const KeyValue& kv = require(key);
        return parse_double(source_, kv.line, kv.value);
    }

    std::vector<double> require_list(const std::string& key) const {
        const KeyValue& kv = require(key);
        return parse_list(source_, kv.line, kv.value);
    }

    const std::string& source() const { return source_; }

private:
    const Section* section_;
    std::string source_;
    std::string name_;
};

PayoffSpec read_payoff(const SectionReader& payoff) {
    const KeyValue& kind = payoff.require("kind");
    const std::string k = lower(kind.value);
    if (k == "call") {
        return PayoffSpec::call(payoff.require_double("strike"));
    }
    if (k == "constant") {
        return PayoffSpec::constant(payoff.require_double("level"));
    }
    if (k == "custom") {
        return PayoffSpec::bounded_custom(payoff.require_list("custom_x"),
                                          payoff.require_list("custom_y"),
                                          payoff.require_double("bound"));
    }
    parse_fail(payoff.source(), kind.line, "payoff kind must be call, constant or custom");
}

DampeningSpec read_dampening(const SectionReader& damp) {
    if (!damp.exists()) {
        return DampeningSpec::unit();
    }
    const KeyValue& kind = damp.require("kind");
    const std::string k = lower(kind.value);
    if (k == "unit") return DampeningSpec::unit();
    if (k == "ou_call") return DampeningSpec::ou_call();
    parse_fail(damp.source(), kind.line, "dampening kind must be unit or ou_call");
}

}  // namespace

ProblemConfig parse_problem_config(std::istream& in, const std::string& source_name) {
    const Document doc = read_document(in, source_name);

    Tolerances tol;
    SectionReader tolerances(doc, source_name, "tolerances");
    if (tolerances.exists()) {
        if (const KeyValue* kv = tolerances.find("generator_row_sum")) {
            tol.generator_row_sum = parse_double(source_name, kv->line, kv->value);
        }
        if (const KeyValue* kv = tolerances.find("theta_relation")) {
            tol.theta_relation = parse_double(source_name, kv->line, kv->value);
        }
        if (const KeyValue* kv = tolerances.find("certificate")) {
            tol.certificate = parse_double(source_name, kv->line, kv->value);
        }
    }

    SectionReader generator(doc, source_name, "generator");
    if (!generator.exists()) {
        throw_config("ConfigParse", source_name + ": missing [generator] section");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1;; ++i) {
        const KeyValue* kv = generator.find("row_" + std::to_string(i));
        if (!kv) break;
        rows.push_back(parse_list(source_name, kv->line, kv->value));
    }
    if (rows.empty()) {
        throw_config("ConfigParse", source_name + ": [generator] needs row_1, row_2, ...");
    }
    GeneratorMatrix gen = GeneratorMatrix::validate(rows, tol.generator_row_sum);

    SectionReader model_section(doc, source_name, "model");
    if (!model_section.exists()) {
        throw_config("ConfigParse", source_name + ": missing [model] section");
    }
    const double beta = model_section.require_double("beta");
    const double horizon = model_section.require_double("t");
    std::optional<std::vector<double>> theta;
    if (model_section.find("theta")) {
        theta = model_section.require_list("theta");
    }
    bool derive_theta = false;
    if (const KeyValue* kv = model_section.find("derive_theta")) {
        derive_theta = parse_bool(source_name, kv->line, kv->value);
    }
    RegimeOUModel model = RegimeOUModel::build(beta, std::move(theta),
                                               model_section.require_list("sigma"),
                                               model_section.require_list("r"), horizon,
                                               std::move(gen), derive_theta, tol);

    SectionReader payoff_section(doc, source_name, "payoff");
    if (!payoff_section.exists()) {
        throw_config("ConfigParse", source_name + ": missing [payoff] section");
    }
    PayoffSpec payoff = read_payoff(payoff_section);
    DampeningSpec dampening = read_dampening(SectionReader(doc, source_name, "dampening"));

    RunOverrides run;
    SectionReader run_section(doc, source_name, "run");
    if (run_section.exists()) {
        if (const KeyValue* kv = run_section.find("t"))
            run.t = parse_double(source_name, kv->line, kv->value);
        if (const KeyValue* kv = run_section.find("x"))
            run.x = parse_double(source_name, kv->line, kv->value);
        if (const KeyValue* kv = run_section.find("regime"))
            run.regime = static_cast<int>(parse_integer(source_name, kv->line, kv->value));
        if (const KeyValue* kv = run_section.find("tol"))
            run.tol = parse_double(source_name, kv->line, kv->value);
        if (const KeyValue* kv = run_section.find("max_iter"))
            run.max_iter = static_cast<long>(parse_integer(source_name, kv->line, kv->value));
        if (const KeyValue* kv = run_section.find("paths"))
            run.paths = parse_integer(source_name, kv->line, kv->value);
        if (const KeyValue* kv = run_section.find("seed"))
            run.seed = static_cast<std::uint64_t>(parse_integer(source_name, kv->line, kv->value));
        if (const KeyValue* kv = run_section.find("nt"))
            run.nt = static_cast<long>(parse_integer(source_name, kv->line, kv->value));
        if (const KeyValue* kv = run_section.find("nx"))
            run.nx = static_cast<long>(parse_integer(source_name, kv->line, kv->value));
        if (const KeyValue* kv = run_section.find("xmin"))
            run.x_min = parse_double(source_name, kv->line, kv->value);
        if (const KeyValue* kv = run_section.find("xmax"))
            run.x_max = parse_double(source_name, kv->line, kv->value);
    }

    std::vector<std::string> warnings = model.warnings();
    for (std::string& note : dampening_warnings(payoff, dampening)) {
        warnings.push_back(std::move(note));
    }

    return ProblemConfig{std::move(model), std::move(payoff), dampening, tol, run,
                         std::move(warnings)};
}

ProblemConfig load_problem_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw_config("ConfigParse", "cannot open config file '" + path + "'");
    }
    return parse_problem_config(in, path);
}

}  // namespace fkswitch
