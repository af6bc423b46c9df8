#ifndef IKNO_ARCHIVE_HPP
#define IKNO_ARCHIVE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ikno/tensor.hpp"

namespace ikno::io {

// Self-describing container of named numeric arrays plus a flat key=value
// metadata block. Used for datasets, checkpoints and prediction dumps.
// Byte layout is documented in docs/formats.md and is little-endian.
class Archive {
public:
    enum class DType : std::uint8_t { F32 = 0, F64 = 1, U64 = 2, U8 = 3 };

    struct Entry {
        std::string name;
        DType dtype = DType::F64;
        Shape dims;
        std::vector<std::uint8_t> bytes;  // row-major payload
    };

    // --- metadata -----------------------------------------------------------
    void set_meta(const std::string& key, const std::string& value);
    void set_meta(const std::string& key, double value);
    void set_meta(const std::string& key, std::uint64_t value);
    bool has_meta(const std::string& key) const;
    std::string meta(const std::string& key) const;            // throws DataError if absent
    std::string meta_or(const std::string& key, const std::string& fallback) const;
    double meta_double(const std::string& key) const;
    std::uint64_t meta_u64(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& meta_items() const { return meta_; }

    // --- arrays -------------------------------------------------------------
    bool has(const std::string& name) const;
    const Entry& entry(const std::string& name) const;
    std::vector<std::string> names() const;

    void put(const std::string& name, const Tensor<float>& t);
    void put(const std::string& name, const Tensor<double>& t);
    void put_u64(const std::string& name, const std::vector<std::uint64_t>& v);
    void put_text(const std::string& name, const std::string& text);

    // Reads convert between f32/f64 storage and the requested element type.
    template <typename T>
    Tensor<T> get(const std::string& name) const;
    std::vector<std::uint64_t> get_u64(const std::string& name) const;
    std::string get_text(const std::string& name) const;

    void remove(const std::string& name);

    // --- file io ------------------------------------------------------------
    void save(const std::string& path) const;
    static Archive load(const std::string& path);

private:
    Entry& upsert(const std::string& name);

    std::vector<std::pair<std::string, std::string>> meta_;  // insertion order
    std::vector<Entry> entries_;                             // insertion order
};

}  // namespace ikno::io

#endif  // IKNO_ARCHIVE_HPP
