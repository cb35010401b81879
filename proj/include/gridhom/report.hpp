#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gridhom/grid.hpp"

namespace gridhom {

constexpr int kSchemaVersion = 1;

enum class Format { human, json };
Format parse_format(const std::string& s);

// doubled value as an exact number: integer when even, "p/2" otherwise
nlohmann::json half_value(int doubled);
std::string half_text(int doubled);

nlohmann::json diagram_json(const GridDiagram& g);

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;  // extra columns after m and a
    struct Row {
        int m = 0, a2 = 0;
        std::vector<nlohmann::json> values;
    };
    std::vector<Row> rows;
};

struct ReportCheck {
    std::string name;
    long checked = 0;
    std::vector<std::string> violations;
};

// one command's output; json mode is a versioned document, human mode a plain listing
class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}
    void set_diagram(const GridDiagram& g) { diagrams_.push_back(g); }
    void setting(const std::string& key, nlohmann::json v) { settings_[key] = std::move(v); }
    void result(const std::string& key, nlohmann::json v) { results_[key] = std::move(v); }
    void add_table(ReportTable t) { tables_.push_back(std::move(t)); }
    void add_check(ReportCheck c) { checks_.push_back(std::move(c)); }
    void add_violation(const std::string& v) { violations_.push_back(v); }
    bool ok() const;
    nlohmann::json to_json() const;
    std::string render(Format f) const;

private:
    std::string command_;
    std::vector<GridDiagram> diagrams_;
    nlohmann::json settings_ = nlohmann::json::object();
    nlohmann::json results_ = nlohmann::json::object();
    std::vector<ReportTable> tables_;
    std::vector<ReportCheck> checks_;
    std::vector<std::string> violations_;
};

}  // namespace gridhom
