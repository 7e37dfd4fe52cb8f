#include "enavs/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "enavs/errors.hpp"

namespace enavs {

namespace {

bool parse_double(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

BandwidthTrace BandwidthTrace::parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<TraceSample> samples;
    int line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto comma = t.find(',');
        if (comma == std::string::npos)
            throw ParseError("trace line " + std::to_string(line_no) +
                             ": expected 'time_s,throughput_mbps'");
        double time_s, mbps;
        const bool ok = parse_double(trim(t.substr(0, comma)), time_s) &&
                        parse_double(trim(t.substr(comma + 1)), mbps);
        if (!ok) {
            if (header_allowed) {  // tolerate one non-numeric header line
                header_allowed = false;
                continue;
            }
            throw ParseError("trace line " + std::to_string(line_no) + ": not numeric");
        }
        header_allowed = false;
        if (samples.empty() && time_s != 0.0)
            throw ParseError("trace line " + std::to_string(line_no) +
                             ": first sample must start at t=0");
        if (!samples.empty() && time_s <= samples.back().start_s)
            throw ParseError("trace line " + std::to_string(line_no) +
                             ": timestamps must be strictly increasing");
        if (!(mbps > 0.0))
            throw ParseError("trace line " + std::to_string(line_no) +
                             ": throughput must be > 0");
        samples.push_back({time_s, mbps});
    }
    if (samples.empty()) throw ParseError("trace: no samples");
    return from_samples(std::move(samples));
}

BandwidthTrace BandwidthTrace::load_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    try {
        return parse_csv(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

BandwidthTrace BandwidthTrace::from_samples(std::vector<TraceSample> samples,
                                            double total_duration_s) {
    if (samples.empty()) throw ParseError("trace: no samples");
    if (samples.front().start_s != 0.0) throw ParseError("trace: first sample must start at t=0");
    for (size_t k = 0; k < samples.size(); ++k) {
        if (!(samples[k].mbps > 0.0)) throw ParseError("trace: throughput must be > 0");
        if (k > 0 && samples[k].start_s <= samples[k - 1].start_s)
            throw ParseError("trace: timestamps must be strictly increasing");
    }
    BandwidthTrace tr;
    tr.samples_ = std::move(samples);
    if (total_duration_s > 0.0) {
        if (total_duration_s <= tr.samples_.back().start_s)
            throw ParseError("trace: duration must exceed the last sample start");
        tr.duration_ = total_duration_s;
    } else if (tr.samples_.size() >= 2) {
        const size_t n = tr.samples_.size();
        tr.duration_ = tr.samples_.back().start_s +
                       (tr.samples_[n - 1].start_s - tr.samples_[n - 2].start_s);
    } else {
        tr.duration_ = 1.0;
    }
    tr.build_cumulative();
    return tr;
}

void BandwidthTrace::build_cumulative() {
    const size_t n = samples_.size();
    cum_mbit_.assign(n + 1, 0.0);
    for (size_t k = 0; k < n; ++k) {
        const double end = (k + 1 < n) ? samples_[k + 1].start_s : duration_;
        cum_mbit_[k + 1] = cum_mbit_[k] + samples_[k].mbps * (end - samples_[k].start_s);
    }
}

double BandwidthTrace::throughput_at(double t) const {
    double w = std::fmod(t, duration_);
    if (w < 0) w += duration_;
    // last sample whose start <= w
    auto it = std::upper_bound(samples_.begin(), samples_.end(), w,
                               [](double v, const TraceSample& s) { return v < s.start_s; });
    return std::prev(it)->mbps;
}

double BandwidthTrace::integral_from_zero(double t) const {
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const TraceSample& s) { return v < s.start_s; });
    const size_t k = static_cast<size_t>(std::distance(samples_.begin(), it)) - 1;
    return cum_mbit_[k] + samples_[k].mbps * (t - samples_[k].start_s);
}

double BandwidthTrace::integral_mbit(double t0, double t1) const {
    if (t1 <= t0) return 0.0;
    const double whole = cum_mbit_.back();
    double w0 = std::fmod(t0, duration_);
    if (w0 < 0) w0 += duration_;
    const double span = t1 - t0;
    const double full_loops = std::floor((w0 + span) / duration_);
    const double w1 = (w0 + span) - full_loops * duration_;
    return full_loops * whole + integral_from_zero(w1) - integral_from_zero(w0);
}

double BandwidthTrace::download_time_s(double start_s, double size_mbit) const {
    if (!(size_mbit > 0.0)) throw DomainError("download size must be > 0");
    if (start_s < 0.0) throw DomainError("download start must be >= 0");

    const double whole = cum_mbit_.back();
    double w = std::fmod(start_s, duration_);
    if (w < 0) w += duration_;

    double tau = 0.0;
    double remaining = size_mbit;

    // finish the partial pass to the end of the trace
    const double to_end = whole - integral_from_zero(w);
    if (remaining > to_end) {
        remaining -= to_end;
        tau += duration_ - w;
        // whole loops
        const double loops = std::floor(remaining / whole);
        if (loops > 0) {
            tau += loops * duration_;
            remaining -= loops * whole;
        }
        w = 0.0;
        if (remaining <= 0.0) return tau;
    }

    // walk segments from w until the remaining megabits are consumed
    auto it = std::upper_bound(samples_.begin(), samples_.end(), w,
                               [](double v, const TraceSample& s) { return v < s.start_s; });
    size_t k = static_cast<size_t>(std::distance(samples_.begin(), it)) - 1;
    double pos = w;
    for (;;) {
        const double seg_end = (k + 1 < samples_.size()) ? samples_[k + 1].start_s : duration_;
        const double rate = samples_[k].mbps;
        const double cap = rate * (seg_end - pos);
        if (remaining <= cap) return tau + remaining / rate;
        remaining -= cap;
        tau += seg_end - pos;
        pos = seg_end;
        ++k;
        if (k == samples_.size()) {  // wrap
            k = 0;
            pos = 0.0;
        }
    }
}

double BandwidthTrace::time_weighted_mean_mbps() const { return cum_mbit_.back() / duration_; }

double BandwidthTrace::max_mbps() const {
    double m = 0.0;
    for (const auto& s : samples_) m = std::max(m, s.mbps);
    return m;
}

namespace {
BandwidthTrace scale_by(const BandwidthTrace& tr, double factor) {
    std::vector<TraceSample> out = tr.samples();
    for (auto& s : out) s.mbps *= factor;
    return BandwidthTrace::from_samples(std::move(out), tr.total_duration_s());
}
}  // namespace

BandwidthTrace BandwidthTrace::scaled_to_mean(double target_mbps) const {
    if (!(target_mbps > 0.0)) throw ConfigError("scale target must be > 0");
    return scale_by(*this, target_mbps / time_weighted_mean_mbps());
}

BandwidthTrace BandwidthTrace::scaled_to_max(double target_mbps) const {
    if (!(target_mbps > 0.0)) throw ConfigError("scale target must be > 0");
    return scale_by(*this, target_mbps / max_mbps());
}

std::string BandwidthTrace::to_csv() const {
    std::ostringstream out;
    out << "time_s,throughput_mbps\n";
    out.precision(17);
    for (const auto& s : samples_) out << s.start_s << "," << s.mbps << "\n";
    return out.str();
}

}  // namespace enavs
