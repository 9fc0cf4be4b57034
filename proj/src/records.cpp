#include "mixlab/records.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mixlab {

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        out << columns[i];
    }
    out << '\n';
    out.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string ExperimentRecord::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
    j["master_seed"] = master_seed;
    j["outputs"] = nlohmann::json::parse(outputs_json.empty() ? "{}" : outputs_json);
    auto& t = j["tables"] = nlohmann::json::object();
    for (const auto& [name, table] : tables) {
        t[name] = {{"columns", table.columns}, {"rows", table.rows}};
    }
    return j.dump(2);
}

std::string write_run_dir(const ExperimentRecord& record, const std::string& root,
                          double wall_time_seconds) {
    namespace fs = std::filesystem;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    auto stamp = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    fs::path dir = fs::path(root) / (std::to_string(stamp) + "-" + record.id);
    fs::create_directories(dir / "tables");

    std::ofstream(dir / "config.json") << (record.config_json.empty() ? "{}" : record.config_json)
                                       << "\n";
    std::ofstream(dir / "record.json") << record.to_json() << "\n";
    nlohmann::json meta;
    meta["wall_time_seconds"] = wall_time_seconds;
    meta["timestamp_ms"] = stamp;
    std::ofstream(dir / "meta.json") << meta.dump(2) << "\n";
    for (const auto& [name, table] : record.tables)
        std::ofstream(dir / "tables" / (name + ".csv")) << table.to_csv();
    return dir.string();
}

} // namespace mixlab
