#include "gridhom/report.hpp"

#include <algorithm>
#include <sstream>

namespace gridhom {

Format parse_format(const std::string& s) {
    if (s == "human" || s == "table") return Format::human;
    if (s == "json") return Format::json;
    throw GridError("UsageError", "unknown format " + s);
}

nlohmann::json half_value(int doubled) {
    if (doubled % 2 == 0) return doubled / 2;
    return std::to_string(doubled) + "/2";
}

std::string half_text(int doubled) {
    if (doubled % 2 == 0) return std::to_string(doubled / 2);
    return std::to_string(doubled) + "/2";
}

nlohmann::json diagram_json(const GridDiagram& g) {
    nlohmann::json j;
    j["name"] = g.name;
    j["n"] = g.n;
    j["o_rows"] = g.o_rows;
    j["x_rows"] = g.x_rows;
    j["components"] = link_components(g).count;
    return j;
}

bool Report::ok() const {
    if (!violations_.empty()) return false;
    for (auto& c : checks_)
        if (!c.violations.empty()) return false;
    return true;
}

namespace {

std::vector<ReportTable::Row> sorted_rows(const ReportTable& t) {
    auto rows = t.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.a2 != b.a2) return a.a2 > b.a2;
        return a.m > b.m;
    });
    return rows;
}

std::string cell(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command_;
    if (diagrams_.size() == 1) {
        j["diagram"] = diagram_json(diagrams_[0]);
    } else {
        j["diagram"] = nullptr;
        nlohmann::json ds = nlohmann::json::array();
        for (auto& g : diagrams_) ds.push_back(diagram_json(g));
        j["diagrams"] = ds;
    }
    j["settings"] = settings_;
    j["results"] = results_;
    nlohmann::json tables = nlohmann::json::object();
    for (auto& t : tables_) {
        nlohmann::json rows = nlohmann::json::array();
        for (auto& r : sorted_rows(t)) {
            nlohmann::json row;
            row["m"] = r.m;
            row["a"] = half_value(r.a2);
            for (size_t i = 0; i < t.columns.size() && i < r.values.size(); ++i) row[t.columns[i]] = r.values[i];
            rows.push_back(row);
        }
        tables[t.name] = rows;
    }
    j["tables"] = tables;
    nlohmann::json checks = nlohmann::json::array();
    nlohmann::json all = nlohmann::json::array();
    for (auto& c : checks_) {
        checks.push_back({{"name", c.name}, {"checked", c.checked}, {"violations", c.violations}});
        for (auto& v : c.violations) all.push_back(c.name + ": " + v);
    }
    for (auto& v : violations_) all.push_back(v);
    j["checks"] = checks;
    j["violations"] = all;
    j["ok"] = ok();
    return j;
}

std::string Report::render(Format f) const {
    if (f == Format::json) return to_json().dump(2) + "\n";
    std::ostringstream os;
    os << command_ << "\n";
    for (auto& g : diagrams_) {
        os << "diagram " << (g.name.empty() ? "(unnamed)" : g.name) << " n=" << g.n << " O=";
        for (int i = 0; i < g.n; ++i) os << (i ? "," : "") << g.o_rows[i];
        os << " X=";
        for (int i = 0; i < g.n; ++i) os << (i ? "," : "") << g.x_rows[i];
        os << "\n";
    }
    for (auto& [k, v] : settings_.items()) os << "  " << k << ": " << cell(v) << "\n";
    for (auto& [k, v] : results_.items()) os << k << ": " << cell(v) << "\n";
    for (auto& t : tables_) {
        os << "\n[" << t.name << "]\n";
        std::vector<std::vector<std::string>> lines;
        std::vector<std::string> head{"m", "a"};
        head.insert(head.end(), t.columns.begin(), t.columns.end());
        lines.push_back(head);
        for (auto& r : sorted_rows(t)) {
            std::vector<std::string> l{std::to_string(r.m), half_text(r.a2)};
            for (auto& v : r.values) l.push_back(cell(v));
            lines.push_back(l);
        }
        std::vector<size_t> w(head.size(), 0);
        for (auto& l : lines)
            for (size_t i = 0; i < l.size() && i < w.size(); ++i) w[i] = std::max(w[i], l[i].size());
        for (auto& l : lines) {
            for (size_t i = 0; i < l.size() && i < w.size(); ++i)
                os << std::string(w[i] - l[i].size() + (i ? 2 : 0), ' ') << l[i];
            os << "\n";
        }
    }
    if (!checks_.empty()) os << "\n";
    for (auto& c : checks_) {
        os << (c.violations.empty() ? "ok   " : "FAIL ") << c.name << "  checked " << c.checked << ", violations "
           << c.violations.size() << "\n";
        for (size_t i = 0; i < c.violations.size() && i < 5; ++i) os << "       " << c.violations[i] << "\n";
    }
    for (auto& v : violations_) os << "violation: " << v << "\n";
    return os.str();
}

}  // namespace gridhom
