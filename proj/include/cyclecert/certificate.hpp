#pragma once

#include <json.hpp>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cyclecert {

// One checked claim with the facts that back it.  Nodes nest: a piece of a
// boundary holds its hypotheses, a hypothesis holds its root counts.
struct CertNode {
    std::string name;
    bool ok = true;
    std::vector<std::pair<std::string, std::string>> facts;
    std::vector<CertNode> children;

    CertNode() = default;
    explicit CertNode(std::string n, bool passed = true) : name(std::move(n)), ok(passed) {}

    CertNode& fact(std::string key, std::string value) {
        facts.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    CertNode& child(CertNode c) {
        children.push_back(std::move(c));
        return children.back();
    }
    bool all_ok() const {
        if (!ok) return false;
        for (const auto& c : children)
            if (!c.all_ok()) return false;
        return true;
    }
};

struct Certificate {
    std::string id;
    std::string proposition;
    std::string parameter_interval;
    std::vector<CertNode> pieces;

    bool verdict() const {
        if (pieces.empty()) return false;
        for (const auto& p : pieces)
            if (!p.all_ok()) return false;
        return true;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "certificate: " << id << "\n";
        os << "proposition: " << proposition << "\n";
        os << "parameter_interval: " << parameter_interval << "\n";
        for (const auto& p : pieces) write(os, p, 0);
        os << "verdict: " << (verdict() ? "certified" : "FAILED") << "\n";
        return os.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["id"] = id;
        j["proposition"] = proposition;
        j["parameter_interval"] = parameter_interval;
        j["verdict"] = verdict();
        j["pieces"] = nlohmann::json::array();
        for (const auto& p : pieces) j["pieces"].push_back(node_json(p));
        return j;
    }

private:
    static void write(std::ostringstream& os, const CertNode& n, int depth) {
        std::string pad(static_cast<std::size_t>(2 * depth), ' ');
        os << pad << "- " << n.name << ": " << (n.all_ok() ? "ok" : "FAILED") << "\n";
        for (const auto& [k, v] : n.facts) os << pad << "    " << k << ": " << v << "\n";
        for (const auto& c : n.children) write(os, c, depth + 1);
    }
    static nlohmann::json node_json(const CertNode& n) {
        nlohmann::json j;
        j["name"] = n.name;
        j["ok"] = n.all_ok();
        j["facts"] = nlohmann::json::array();
        for (const auto& [k, v] : n.facts) j["facts"].push_back({{"key", k}, {"value", v}});
        j["children"] = nlohmann::json::array();
        for (const auto& c : n.children) j["children"].push_back(node_json(c));
        return j;
    }
};

}  // namespace cyclecert
