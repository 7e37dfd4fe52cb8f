#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enavs {

struct TraceSample {
    double start_s = 0.0;
    double mbps = 0.0;
};

// Piecewise-constant throughput over time. Sample k holds from its start
// time to the next sample's start; the final sample holds to
// total_duration_s. Queries past the end wrap around to t = 0, so episodes
// longer than the trace stay well-defined.
class BandwidthTrace {
public:
    BandwidthTrace() = default;

    // CSV lines "time_s,throughput_mbps"; one optional header line. Throws
    // ParseError naming the offending line.
    static BandwidthTrace parse_csv(const std::string& text);
    static BandwidthTrace load_csv_file(const std::string& path);

    // total_duration_s < 0 derives the final segment length: equal to the
    // preceding segment for multi-sample traces, 1 s for a single sample.
    static BandwidthTrace from_samples(std::vector<TraceSample> samples,
                                       double total_duration_s = -1.0);

    double total_duration_s() const { return duration_; }
    const std::vector<TraceSample>& samples() const { return samples_; }

    double throughput_at(double t) const;  // wrapped
    double time_weighted_mean_mbps() const;
    double max_mbps() const;

    // Megabits delivered over [t0, t1], wrapping.
    double integral_mbit(double t0, double t1) const;

    // Smallest tau with integral over [start, start+tau] equal to size_mbit.
    double download_time_s(double start_s, double size_mbit) const;

    BandwidthTrace scaled_to_mean(double target_mbps) const;
    BandwidthTrace scaled_to_max(double target_mbps) const;

    std::string to_csv() const;

private:
    std::vector<TraceSample> samples_;
    double duration_ = 0.0;
    std::vector<double> cum_mbit_;  // cumulative integral at sample starts; back() = full trace

    void build_cumulative();
    double integral_from_zero(double t) const;  // t in [0, duration_]
};

}  // namespace enavs
