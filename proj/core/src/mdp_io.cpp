#include "rmdp/mdp_io.hpp"

#include <fstream>
#include <sstream>

namespace rmdp {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw ParseError(std::string("missing required field \"") + key + "\"", key);
    }
    return *it;
}

double as_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError("field " + field + " must be a number", field);
    return j.get<double>();
}

std::vector<double> as_number_array(const json& j, const std::string& field) {
    if (!j.is_array()) throw ParseError("field " + field + " must be an array", field);
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

} // namespace

json mdp_to_json(const TabularMDP& mdp) {
    json doc;
    doc["gamma"] = mdp.gamma();
    doc["num_states"] = mdp.num_states();
    doc["actions"] = mdp.action_labels();
    doc["rewards"] = mdp.rewards_nested();
    doc["transitions"] = mdp.kernel().to_nested();
    doc["terminal"] = mdp.terminal_states();
    doc["reward_bound"] = mdp.reward_bound();
    return doc;
}

TabularMDP mdp_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("model file must contain a JSON object");

    const double gamma = as_number(require(doc, "gamma"), "gamma");
    const json& jn = require(doc, "num_states");
    if (!jn.is_number_integer() || jn.get<long long>() <= 0) {
        throw ParseError("field num_states must be a positive integer", "num_states");
    }
    const auto n = static_cast<std::size_t>(jn.get<long long>());

    const json& ja = require(doc, "actions");
    const json& jr = require(doc, "rewards");
    const json& jt = require(doc, "transitions");
    for (const auto& [name, j] : {std::pair<const char*, const json*>{"actions", &ja},
                                  {"rewards", &jr}, {"transitions", &jt}}) {
        if (!j->is_array() || j->size() != n) {
            throw ParseError(std::string("field ") + name + " must be an array with num_states entries", name);
        }
    }

    std::vector<std::vector<std::string>> labels(n);
    std::vector<std::vector<double>> rewards(n);
    std::vector<std::vector<std::vector<double>>> rows(n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::string ss = "[" + std::to_string(s) + "]";
        if (!ja[s].is_array()) throw ParseError("field actions" + ss + " must be an array", "actions" + ss);
        for (std::size_t a = 0; a < ja[s].size(); ++a) {
            const auto& lab = ja[s][a];
            if (lab.is_string()) {
                labels[s].push_back(lab.get<std::string>());
            } else if (lab.is_number_integer()) {
                labels[s].push_back(std::to_string(lab.get<long long>()));
            } else {
                throw ParseError("action labels must be strings", "actions" + ss);
            }
        }
        rewards[s] = as_number_array(jr[s], "rewards" + ss);
        if (rewards[s].size() != labels[s].size()) {
            throw ParseError("rewards" + ss + " must have one entry per action", "rewards" + ss);
        }
        if (!jt[s].is_array() || jt[s].size() != labels[s].size()) {
            throw ParseError("transitions" + ss + " must have one row per action", "transitions" + ss);
        }
        for (std::size_t a = 0; a < jt[s].size(); ++a) {
            const std::string field = "transitions" + ss + "[" + std::to_string(a) + "]";
            rows[s].push_back(as_number_array(jt[s][a], field));
            if (rows[s].back().size() != n) {
                throw ParseError(field + " must have num_states entries", field);
            }
        }
    }

    std::vector<std::size_t> terminal;
    if (auto it = doc.find("terminal"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("field terminal must be an array", "terminal");
        for (const auto& t : *it) {
            if (!t.is_number_integer() || t.get<long long>() < 0) {
                throw ParseError("terminal entries must be non-negative integers", "terminal");
            }
            terminal.push_back(static_cast<std::size_t>(t.get<long long>()));
        }
    }

    std::optional<double> bound;
    if (auto it = doc.find("reward_bound"); it != doc.end()) {
        bound = as_number(*it, "reward_bound");
    }

    return TabularMDP(gamma, std::move(labels), std::move(rewards),
                      TransitionKernel::from_nested(rows), std::move(terminal), bound);
}

TabularMDP parse_mdp(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        const std::size_t line = line_of_offset(text, e.byte);
        throw ParseError("syntax error at line " + std::to_string(line) + ": " + e.what(), {}, line);
    }
    TabularMDP mdp = mdp_from_json(doc);
    auto violations = validate_mdp(mdp);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return mdp;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

TabularMDP load_mdp(const std::filesystem::path& path) {
    return parse_mdp(read_text_file(path));
}

void save_mdp(const TabularMDP& mdp, const std::filesystem::path& path) {
    write_text_file(path, mdp_to_json(mdp).dump(1) + "\n");
}

} // namespace rmdp
