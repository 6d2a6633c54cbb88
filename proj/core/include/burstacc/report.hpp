#pragma once

#include <chrono>

namespace burstacc {

// Wall-clock seconds per pipeline stage, mirroring the usual burst-restore
// cost breakdown.
struct StageTimes {
    double registration = 0.0;
    double forward_transform = 0.0;
    double weight_threshold = 0.0;
    double accumulation = 0.0;
    double inverse_transform = 0.0;

    double sum() const {
        return registration + forward_transform + weight_threshold + accumulation +
               inverse_transform;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}

    double seconds() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(now - start_).count();
    }

    // Returns the lap time and restarts.
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace burstacc
