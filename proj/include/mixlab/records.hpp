#ifndef MIXLAB_RECORDS_HPP
#define MIXLAB_RECORDS_HPP

#include <map>
#include <string>
#include <vector>

namespace mixlab {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string to_csv() const; // RFC 4180, LF line endings
};

// Seeded, replayable result of a run: rerunning with the stored config and
// seed reproduces the record byte-for-byte on exact paths. Volatile data
// (wall time, timestamps) never enters the record itself.
struct ExperimentRecord {
    std::string id;
    std::string config_json;   // canonical snapshot of the inputs
    std::uint64_t master_seed = 0;
    std::string outputs_json;  // scalars / vectors / nested reports
    std::map<std::string, Table> tables;

    std::string to_json() const;
};

// Creates <root>/<stamp>-<id>/ with config.json, record.json, meta.json and
// tables/*.csv; returns the directory path. meta.json holds wall time and the
// timestamp, outside the replay-compared record.
std::string write_run_dir(const ExperimentRecord& record, const std::string& root,
                          double wall_time_seconds);

} // namespace mixlab

#endif
