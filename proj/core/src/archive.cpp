#include "ikno/archive.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ikno/errors.hpp"

namespace ikno::io {

namespace {

constexpr char kMagic[8] = {'I', 'K', 'N', 'O', 'A', 'R', '1', '\n'};
constexpr std::uint64_t kMaxDims = 16;
constexpr std::uint64_t kMaxNameLen = 4096;

std::size_t dtype_size(Archive::DType d) {
    switch (d) {
        case Archive::DType::F32: return 4;
        case Archive::DType::F64: return 8;
        case Archive::DType::U64: return 8;
        case Archive::DType::U8: return 1;
    }
    throw DataError("unknown dtype tag");
}

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw DataError("archive truncated");
    return v;
}

}  // namespace

void Archive::set_meta(const std::string& key, const std::string& value) {
    if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos)
        throw InputError("metadata key may not contain '=' or newline: " + key);
    if (value.find('\n') != std::string::npos)
        throw InputError("metadata value may not contain newline (key " + key + ")");
    for (auto& kv : meta_) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    meta_.emplace_back(key, value);
}

void Archive::set_meta(const std::string& key, double value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    set_meta(key, os.str());
}

void Archive::set_meta(const std::string& key, std::uint64_t value) {
    set_meta(key, std::to_string(value));
}

bool Archive::has_meta(const std::string& key) const {
    for (const auto& kv : meta_)
        if (kv.first == key) return true;
    return false;
}

std::string Archive::meta(const std::string& key) const {
    for (const auto& kv : meta_)
        if (kv.first == key) return kv.second;
    throw DataError("archive metadata key missing: " + key);
}

std::string Archive::meta_or(const std::string& key, const std::string& fallback) const {
    return has_meta(key) ? meta(key) : fallback;
}

double Archive::meta_double(const std::string& key) const {
    try {
        return std::stod(meta(key));
    } catch (const std::logic_error&) {
        throw DataError("archive metadata key " + key + " is not numeric");
    }
}

std::uint64_t Archive::meta_u64(const std::string& key) const {
    try {
        return std::stoull(meta(key));
    } catch (const std::logic_error&) {
        throw DataError("archive metadata key " + key + " is not an integer");
    }
}

bool Archive::has(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.name == name; });
}

const Archive::Entry& Archive::entry(const std::string& name) const {
    for (const Entry& e : entries_)
        if (e.name == name) return e;
    throw DataError("archive array missing: " + name);
}

std::vector<std::string> Archive::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const Entry& e : entries_) out.push_back(e.name);
    return out;
}

Archive::Entry& Archive::upsert(const std::string& name) {
    for (Entry& e : entries_)
        if (e.name == name) return e;
    entries_.push_back(Entry{name, DType::F64, {}, {}});
    return entries_.back();
}

void Archive::put(const std::string& name, const Tensor<float>& t) {
    Entry& e = upsert(name);
    e.dtype = DType::F32;
    e.dims = t.shape();
    e.bytes.resize(t.size() * sizeof(float));
    std::memcpy(e.bytes.data(), t.data(), e.bytes.size());
}

void Archive::put(const std::string& name, const Tensor<double>& t) {
    Entry& e = upsert(name);
    e.dtype = DType::F64;
    e.dims = t.shape();
    e.bytes.resize(t.size() * sizeof(double));
    std::memcpy(e.bytes.data(), t.data(), e.bytes.size());
}

void Archive::put_u64(const std::string& name, const std::vector<std::uint64_t>& v) {
    Entry& e = upsert(name);
    e.dtype = DType::U64;
    e.dims = {v.size()};
    e.bytes.resize(v.size() * sizeof(std::uint64_t));
    std::memcpy(e.bytes.data(), v.data(), e.bytes.size());
}

void Archive::put_text(const std::string& name, const std::string& text) {
    Entry& e = upsert(name);
    e.dtype = DType::U8;
    e.dims = {text.size()};
    e.bytes.assign(text.begin(), text.end());
}

template <typename T>
Tensor<T> Archive::get(const std::string& name) const {
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
    const Entry& e = entry(name);
    const std::size_t n = numel(e.dims);
    Tensor<T> out(e.dims);
    if (e.dtype == DType::F32) {
        const float* src = reinterpret_cast<const float*>(e.bytes.data());
        for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<T>(src[i]);
    } else if (e.dtype == DType::F64) {
        const double* src = reinterpret_cast<const double*>(e.bytes.data());
        for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<T>(src[i]);
    } else {
        throw DataError("archive array " + name + " is not floating point");
    }
    return out;
}

template Tensor<float> Archive::get<float>(const std::string&) const;
template Tensor<double> Archive::get<double>(const std::string&) const;

std::vector<std::uint64_t> Archive::get_u64(const std::string& name) const {
    const Entry& e = entry(name);
    if (e.dtype != DType::U64) throw DataError("archive array " + name + " is not u64");
    std::vector<std::uint64_t> out(numel(e.dims));
    std::memcpy(out.data(), e.bytes.data(), e.bytes.size());
    return out;
}

std::string Archive::get_text(const std::string& name) const {
    const Entry& e = entry(name);
    if (e.dtype != DType::U8) throw DataError("archive array " + name + " is not text");
    return std::string(e.bytes.begin(), e.bytes.end());
}

void Archive::remove(const std::string& name) {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                  [&](const Entry& e) { return e.name == name; }),
                   entries_.end());
}

void Archive::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open archive for writing: " + path);
    os.write(kMagic, sizeof(kMagic));

    std::ostringstream meta_blob;
    for (const auto& kv : meta_) meta_blob << kv.first << "=" << kv.second << "\n";
    const std::string meta_str = meta_blob.str();
    write_pod<std::uint64_t>(os, meta_str.size());
    os.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));

    write_pod<std::uint64_t>(os, entries_.size());
    for (const Entry& e : entries_) {
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(e.name.size()));
        os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(e.dtype));
        write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(e.dims.size()));
        for (std::size_t d : e.dims) write_pod<std::uint64_t>(os, d);
        write_pod<std::uint64_t>(os, e.bytes.size());
        os.write(reinterpret_cast<const char*>(e.bytes.data()),
                 static_cast<std::streamsize>(e.bytes.size()));
    }
    if (!os) throw DataError("failed writing archive: " + path);
}

Archive Archive::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open archive: " + path);

    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError("not an ikno archive: " + path);

    Archive a;
    const auto meta_len = read_pod<std::uint64_t>(is);
    std::string meta_str(meta_len, '\0');
    is.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
    if (!is) throw DataError("archive truncated (metadata): " + path);
    std::istringstream meta_in(meta_str);
    std::string line;
    while (std::getline(meta_in, line)) {
        const auto pos = line.find('=');
        if (pos == std::string::npos) continue;
        a.meta_.emplace_back(line.substr(0, pos), line.substr(pos + 1));
    }

    const auto n_entries = read_pod<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < n_entries; ++i) {
        const auto name_len = read_pod<std::uint32_t>(is);
        if (name_len > kMaxNameLen) throw DataError("archive entry name too long");
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        const auto dtype_raw = read_pod<std::uint8_t>(is);
        if (dtype_raw > 3) throw DataError("archive entry " + name + ": bad dtype");
        const auto ndim = read_pod<std::uint8_t>(is);
        if (ndim > kMaxDims) throw DataError("archive entry " + name + ": too many dims");
        Shape dims(ndim);
        for (auto& d : dims) d = read_pod<std::uint64_t>(is);
        const auto payload = read_pod<std::uint64_t>(is);
        const auto dtype = static_cast<DType>(dtype_raw);
        if (payload != numel(dims) * dtype_size(dtype))
            throw DataError("archive entry " + name + ": payload size mismatch");
        Entry e{std::move(name), dtype, std::move(dims), std::vector<std::uint8_t>(payload)};
        is.read(reinterpret_cast<char*>(e.bytes.data()), static_cast<std::streamsize>(payload));
        if (!is) throw DataError("archive truncated (payload): " + path);
        if (a.has(e.name)) throw DataError("archive has duplicate entry: " + e.name);
        a.entries_.push_back(std::move(e));
    }
    return a;
}

}  // namespace ikno::io
