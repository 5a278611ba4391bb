#pragma once

// Unit conversions. Internally the simulator works in MI / MIPS, bytes,
// bits per second, seconds, watts and US dollars.

namespace mera::units {

inline constexpr double kib = 1024.0;
inline constexpr double mib = 1024.0 * kib;
inline constexpr double gib = 1024.0 * mib;

inline constexpr double millisecond = 1e-3;
inline constexpr double mbps = 1e6;
inline constexpr double gbps = 1e9;

inline constexpr double joules_per_kwh = 3.6e6;
inline constexpr double seconds_per_month = 30.0 * 24.0 * 3600.0;
inline constexpr double hours_per_month = 730.0;

inline constexpr double bits_per_byte = 8.0;

// Networking equipment datasheets quote energy per bit in nanojoules.
constexpr double nj_per_bit_to_j_per_byte(double nj_per_bit) {
    return nj_per_bit * 1e-9 * bits_per_byte;
}

// $/kWh -> $/J
constexpr double per_kwh_to_per_joule(double price_per_kwh) {
    return price_per_kwh / joules_per_kwh;
}

} // namespace mera::units
