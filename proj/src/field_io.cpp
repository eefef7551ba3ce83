#include <cstring>
#include <fstream>
#include <stdexcept>

#include "orbsafe/grid.hpp"

namespace orbsafe {

namespace {
constexpr char kMagic[4] = {'H', 'J', 'F', '1'};

void put_u32(std::ofstream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

std::uint32_t get_u32(std::ifstream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

// Grid files are only consumed on little-endian hosts; f64 payloads are
// written raw.
void put_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

double get_f64(std::ifstream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace

void write_field(const std::string& path, const ScalarField& field) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    os.write(kMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(kAxes));
    for (const auto& ax : field.spec.axes) {
        put_f64(os, ax.min);
        put_f64(os, ax.max);
        put_u32(os, ax.count);
    }
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

ScalarField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path);
    const std::uint32_t axes = get_u32(is);
    if (axes != kAxes)
        throw std::runtime_error("read_field: expected 4 axes, got " + std::to_string(axes) +
                                 " in " + path);
    ScalarField f;
    for (auto& ax : f.spec.axes) {
        ax.min = get_f64(is);
        ax.max = get_f64(is);
        ax.count = get_u32(is);
    }
    if (!is) throw std::runtime_error("read_field: truncated header in " + path);
    f.spec.validate();
    f.values.resize(f.spec.size());
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_field: truncated values in " + path);
    return f;
}

}  // namespace orbsafe
