// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "randsense/errors.hpp"

namespace randsense {

// dBm <-> linear milliwatt. Config files speak dBm; all math is linear.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// The scalar world every operation reads: array sizes, frame length,
// transmit power budget and per-entry noise variance (both linear mW).
struct SystemConfig {
    int n_tx = 8;
    int n_rx = 4;
    int frame_len = 8;
    double power = 1000.0;   // P, 30 dBm
    double noise_var = 1.0;  // sigma_s^2, 0 dBm
    std::uint64_t master_seed = 1;

    // L * P / sigma_s^2
    double transmit_snr() const {
        return static_cast<double>(frame_len) * power / noise_var;
    }

    void validate() const {
        if (n_tx < 1) throw InvalidParameterError("n_tx must be >= 1");
        if (n_rx < 1) throw InvalidParameterError("n_rx must be >= 1");
        if (frame_len < 1) throw InvalidParameterError("frame_len must be >= 1");
        if (!(power > 0.0)) throw InvalidParameterError("power must be > 0");
        if (!(noise_var > 0.0))
            throw InvalidParameterError("noise_var must be > 0");
        const double snr = transmit_snr();
        if (!std::isfinite(snr) || !(snr > 0.0))
            throw InvalidParameterError("transmit SNR must be finite and positive");
    }

    bool operator==(const SystemConfig&) const = default;
};

} // namespace randsense
