#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "experiments.hpp"
#include "report_io.hpp"

namespace itoquad {

struct BenchRow {
    std::size_t threads = 1;
    double seconds = 0.0;
    double speedup = 1.0;       // relative to the first entry's single-thread time
    bool identical = true;      // numbers match the 1-thread run byte for byte
};

/// Times the strong-error workload of `cfg` at every thread count. A 1-thread
/// run always anchors the speedup column and the identity check.
inline std::vector<BenchRow> bench(const ExperimentConfig& cfg, const std::vector<std::size_t>& thread_list) {
    if (thread_list.empty()) throw config_error("thread list is empty");
    using clock = std::chrono::steady_clock;

    auto timed = [&](std::size_t threads, std::string& csv) {
        ExperimentConfig c = cfg;
        c.threads = threads;
        const auto t0 = clock::now();
        const auto rep = strong_error(c);
        const std::chrono::duration<double> dt = clock::now() - t0;
        csv = report_to_csv(rep);
        return dt.count();
    };

    std::string base_csv;
    const double base = timed(1, base_csv);
    std::vector<BenchRow> rows;
    for (std::size_t t : thread_list) {
        if (t == 0) throw config_error("thread count must be at least 1");
        BenchRow row;
        row.threads = t;
        if (t == 1) {
            row.seconds = base;
        } else {
            std::string csv;
            row.seconds = timed(t, csv);
            row.identical = csv == base_csv;
        }
        row.speedup = t == 1 ? 1.0 : base / row.seconds;
        rows.push_back(row);
    }
    return rows;
}

inline std::string bench_to_csv(const std::vector<BenchRow>& rows) {
    std::string out = "threads,seconds,speedup,identical\n";
    for (const auto& r : rows) {
        out += std::to_string(r.threads) + ',' + format_number(r.seconds) + ',' + format_number(r.speedup) + ',' +
               (r.identical ? "true" : "false") + '\n';
    }
    return out;
}

inline std::string bench_to_json(const std::vector<BenchRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"threads", r.threads}, {"seconds", r.seconds}, {"speedup", r.speedup}, {"identical", r.identical}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace itoquad
