#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "salma/analysis.hpp"
#include "salma/signal.hpp"
#include "salma/stft.hpp"

namespace salma::io {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

// ---- signal CSV: `# fs=...` comment, `index,value` header, one sample per row

inline void write_signal_csv(const std::string& path, const TimeSignal& x) {
    auto f = open_out(path);
    f << "# fs=" << format_double(x.fs) << "\n";
    f << "index,value\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        f << i << "," << format_double(x[i]) << "\n";
}

inline TimeSignal read_signal_csv(const std::string& path) {
    auto f = open_in(path);
    TimeSignal x;
    x.fs = 0.0;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("fs=");
            if (pos != std::string::npos) x.fs = std::stod(line.substr(pos + 3));
            continue;
        }
        if (!line.empty() && !(std::isdigit(line[0]) || line[0] == '-')) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed CSV row in " + path + ": " + line);
        x.samples.push_back(std::stod(line.substr(comma + 1)));
    }
    if (x.samples.empty()) throw std::runtime_error("no samples in " + path);
    if (x.fs <= 0.0) x.fs = 1.0;
    return x;
}

// ---- profile CSV: axis column named after the unit

inline void write_profile_csv(const std::string& path, const Profile& p) {
    auto f = open_out(path);
    f << (p.axis_unit == "Hz" ? "freq_hz" : "time_s") << ",value\n";
    for (std::size_t i = 0; i < p.values.size(); ++i)
        f << format_double(p.axis(i)) << "," << format_double(p.values[i]) << "\n";
}

// ---- coefficient magnitude grid CSV: bins as rows, frames as columns

inline void write_magnitude_csv(const std::string& path, const Spectrogram& c, double fs) {
    auto f = open_out(path);
    f << "# M1=" << c.rows << " M2=" << c.cols << " fs=" << format_double(fs)
      << " hop=" << c.plan.hop << "\n";
    for (int m1 = 0; m1 < c.rows; ++m1) {
        for (int m2 = 0; m2 < c.cols; ++m2) {
            if (m2) f << ",";
            f << format_double(std::abs(c.at(m1, m2)));
        }
        f << "\n";
    }
}

/// Magnitude grid plus metadata, as read back from write_magnitude_csv.
struct MagnitudeGrid {
    int rows = 0;
    int cols = 0;
    double fs = 0.0;
    int hop = 0;
    std::vector<double> values;  // row-major

    double at(int m1, int m2) const {
        return values[static_cast<size_t>(m1) * cols + m2];
    }
};

inline MagnitudeGrid read_magnitude_csv(const std::string& path) {
    auto f = open_in(path);
    MagnitudeGrid g;
    std::string line;
    if (!std::getline(f, line) || line.rfind("# M1=", 0) != 0)
        throw std::runtime_error("missing grid header in " + path);
    std::sscanf(line.c_str(), "# M1=%d M2=%d fs=%lf hop=%d", &g.rows, &g.cols, &g.fs, &g.hop);
    if (g.rows < 1 || g.cols < 1 || g.fs <= 0.0)
        throw std::runtime_error("malformed grid header in " + path);
    g.values.reserve(static_cast<size_t>(g.rows) * g.cols);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) g.values.push_back(std::stod(cell));
    }
    if (g.values.size() != static_cast<size_t>(g.rows) * g.cols)
        throw std::runtime_error("grid size mismatch in " + path);
    return g;
}

// ---- 32-bit float WAV, mono

inline void write_wav(const std::string& path, const TimeSignal& x) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);

    const std::uint32_t n = static_cast<std::uint32_t>(x.size());
    const std::uint32_t sample_rate = static_cast<std::uint32_t>(x.fs);
    const std::uint32_t data_bytes = n * 4;
    const std::uint32_t byte_rate = sample_rate * 4;

    auto put16 = [&](std::uint16_t v) { f.write(reinterpret_cast<char*>(&v), 2); };
    auto put32 = [&](std::uint32_t v) { f.write(reinterpret_cast<char*>(&v), 4); };

    f.write("RIFF", 4);
    put32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put32(16);
    put16(3);  // IEEE float
    put16(1);  // mono
    put32(sample_rate);
    put32(byte_rate);
    put16(4);   // block align
    put16(32);  // bits per sample
    f.write("data", 4);
    put32(data_bytes);
    for (double v : x.samples) {
        const float s = static_cast<float>(v);
        f.write(reinterpret_cast<const char*>(&s), 4);
    }
}

inline TimeSignal read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);

    char tag[5] = {};
    auto get16 = [&]() {
        std::uint16_t v = 0;
        f.read(reinterpret_cast<char*>(&v), 2);
        return v;
    };
    auto get32 = [&]() {
        std::uint32_t v = 0;
        f.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };

    f.read(tag, 4);
    if (std::strncmp(tag, "RIFF", 4) != 0) throw std::runtime_error("not a WAV file: " + path);
    get32();
    f.read(tag, 4);
    if (std::strncmp(tag, "WAVE", 4) != 0) throw std::runtime_error("not a WAV file: " + path);

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    TimeSignal x;
    while (f.read(tag, 4)) {
        const std::uint32_t chunk = get32();
        if (std::strncmp(tag, "fmt ", 4) == 0) {
            format = get16();
            channels = get16();
            sample_rate = get32();
            get32();
            get16();
            bits = get16();
            if (chunk > 16) f.seekg(chunk - 16, std::ios::cur);
        } else if (std::strncmp(tag, "data", 4) == 0) {
            if (channels != 1) throw std::runtime_error("only mono WAV is supported: " + path);
            if (format == 3 && bits == 32) {
                const std::uint32_t n = chunk / 4;
                x.samples.resize(n);
                for (std::uint32_t i = 0; i < n; ++i) {
                    float s = 0;
                    f.read(reinterpret_cast<char*>(&s), 4);
                    x.samples[i] = s;
                }
            } else if (format == 1 && bits == 16) {
                const std::uint32_t n = chunk / 2;
                x.samples.resize(n);
                for (std::uint32_t i = 0; i < n; ++i) {
                    std::int16_t s = 0;
                    f.read(reinterpret_cast<char*>(&s), 2);
                    x.samples[i] = s / 32768.0;
                }
            } else {
                throw std::runtime_error("unsupported WAV encoding in " + path);
            }
            break;
        } else {
            f.seekg(chunk + (chunk & 1), std::ios::cur);
        }
    }
    if (x.samples.empty()) throw std::runtime_error("no audio data in " + path);
    x.fs = static_cast<double>(sample_rate);
    return x;
}

/// Dispatch on file extension.
inline TimeSignal read_signal(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".wav") return read_wav(path);
    return read_signal_csv(path);
}

}  // namespace salma::io
