#include "stochtaylor/coeff_store.hpp"

#include "stochtaylor/errors.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

namespace stochtaylor {

namespace fs = std::filesystem;

namespace {

std::string profile_field(const WeightProfile& profile) {
    std::string out;
    for (int m = 0; m < profile.k(); ++m) {
        if (m) out += ',';
        out += std::to_string(profile.l[static_cast<std::size_t>(m)]);
    }
    return out;
}

std::string record_prefix(const WeightProfile& profile) {
    std::string out = std::to_string(profile.k());
    for (int v : profile.l) out += ' ' + std::to_string(v);
    return out + " |";
}

class Crc {
public:
    void update(const std::string& s) {
        value_ = crc32(value_, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size()));
    }
    std::uint32_t value() const { return static_cast<std::uint32_t>(value_); }

private:
    uLong value_ = crc32(0L, Z_NULL, 0);
};

std::string hex32(std::uint32_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(8) << std::setfill('0') << v;
    return os.str();
}

// Visits the box {0..p}^k in lexicographic order.
template <typename F>
void for_each_index(int k, int p, F&& f) {
    MultiIndex j{};
    while (true) {
        f(j);
        int m = k - 1;
        while (m >= 0 && j[static_cast<std::size_t>(m)] == p) j[static_cast<std::size_t>(m--)] = 0;
        if (m < 0) return;
        ++j[static_cast<std::size_t>(m)];
    }
}

}  // namespace

std::uint64_t save(const CoeffTensor& tensor, const fs::path& path, bool force) {
    if (fs::exists(path) && !force)
        throw StoreError(StoreErrorKind::Exists, "refusing to overwrite " + path.string() + " (use force)");
    const int k = tensor.k();
    const std::string prefix = record_prefix(tensor.profile());

    std::string body;
    Crc crc;
    std::uint64_t count = 0;
    const auto& entries = tensor.nonzeros();
    std::size_t next = 0;
    for_each_index(k, tensor.cap(), [&](const MultiIndex& j) {
        std::string line = prefix;
        for (int m = 0; m < k; ++m) line += ' ' + std::to_string(j[static_cast<std::size_t>(m)]);
        line += " | ";
        if (next < entries.size() && entries[next].j == j) {
            const Rational& v = entries[next++].value;
            line += v.get_num().get_str() + '/' + v.get_den().get_str();
        } else {
            line += "0/1";
        }
        line += '\n';
        crc.update(line);
        body += line;
        ++count;
    });

    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreError(StoreErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        out << kStoreMagic << ' ' << kStoreVersion << ' ' << profile_field(tensor.profile()) << ' ' << tensor.cap()
            << ' ' << hex32(crc.value()) << '\n';
        out << body;
        out.flush();
        if (!out) throw StoreError(StoreErrorKind::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw StoreError(StoreErrorKind::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
    }
    return count;
}

StoreHeader read_header(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError(StoreErrorKind::Io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw StoreError(StoreErrorKind::Truncated, path.string() + ": missing header");
    std::istringstream hs(line);
    std::string magic, version, profile, cap, checksum;
    hs >> magic >> version >> profile >> cap >> checksum;
    if (magic != kStoreMagic) throw StoreError(StoreErrorKind::Malformed, path.string() + ": not a coefficient file");
    if (version != kStoreVersion)
        throw StoreError(StoreErrorKind::VersionMismatch,
                         path.string() + ": format version '" + version + "', expected '" + kStoreVersion + "'");
    StoreHeader header;
    header.version = version;
    try {
        header.profile = WeightProfile::parse(profile);
        header.cap = std::stoi(cap);
        header.checksum = static_cast<std::uint32_t>(std::stoul(checksum, nullptr, 16));
    } catch (const std::exception&) {
        throw StoreError(StoreErrorKind::Malformed, path.string() + ": malformed header");
    }
    return header;
}

CoeffTensor load(const fs::path& path, const WeightProfile& profile, int p) {
    const StoreHeader header = read_header(path);
    if (header.profile != profile)
        throw StoreError(StoreErrorKind::ProfileMismatch,
                         path.string() + ": holds profile " + profile_field(header.profile) + ", requested " +
                             profile_field(profile));
    if (p > header.cap)
        throw StoreError(StoreErrorKind::InsufficientCap, path.string() + ": insufficient cap, stored p = " +
                                                              std::to_string(header.cap) + ", requested p = " +
                                                              std::to_string(p));
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);

    const int k = profile.k();
    const std::uint64_t expected = box_size(k, header.cap);
    const std::string prefix = record_prefix(profile);
    Crc crc;
    std::uint64_t count = 0;
    std::vector<CoeffTensor::Entry> entries;
    std::vector<std::string> raw;
    raw.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(expected, 1u << 20)));
    while (std::getline(in, line)) {
        if (in.eof()) throw StoreError(StoreErrorKind::Truncated, path.string() + ": last record is incomplete");
        crc.update(line + '\n');
        raw.push_back(std::move(line));
        ++count;
    }
    if (count < expected)
        throw StoreError(StoreErrorKind::Truncated, path.string() + ": " + std::to_string(count) + " of " +
                                                        std::to_string(expected) + " records present");
    if (count > expected) throw StoreError(StoreErrorKind::Malformed, path.string() + ": trailing records");
    if (crc.value() != header.checksum)
        throw StoreError(StoreErrorKind::Checksum, path.string() + ": checksum mismatch (header " +
                                                       hex32(header.checksum) + ", body " + hex32(crc.value()) + ")");

    for (const auto& r : raw) {
        if (r.compare(0, prefix.size(), prefix) != 0)
            throw StoreError(StoreErrorKind::Malformed, path.string() + ": record with foreign profile: " + r);
        std::istringstream rs(r.substr(prefix.size()));
        CoeffTensor::Entry e;
        bool inside = true;
        for (int m = 0; m < k; ++m) {
            rs >> e.j[static_cast<std::size_t>(m)];
            inside = inside && e.j[static_cast<std::size_t>(m)] <= p;
        }
        std::string bar, value;
        rs >> bar >> value;
        if (!rs || bar != "|") throw StoreError(StoreErrorKind::Malformed, path.string() + ": malformed record: " + r);
        if (!inside || value == "0/1") continue;
        try {
            e.value = Rational(value);
        } catch (const std::exception&) {
            throw StoreError(StoreErrorKind::Malformed, path.string() + ": bad rational in record: " + r);
        }
        if (e.value.get_den() <= 0 || gcd(e.value.get_num(), e.value.get_den()) != 1)
            throw StoreError(StoreErrorKind::Malformed, path.string() + ": rational not in lowest terms: " + r);
        entries.push_back(std::move(e));
    }
    return CoeffTensor(profile, p, std::move(entries));
}

fs::path default_store_dir() {
    if (const char* env = std::getenv("STOCHTAYLOR_STORE"); env && *env) return fs::path(env);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "stochtaylor";
    if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "stochtaylor";
    return fs::temp_directory_path() / "stochtaylor";
}

fs::path store_file(const fs::path& dir, const WeightProfile& profile) {
    std::string name = "flcoeff_";
    for (int m = 0; m < profile.k(); ++m) {
        if (m) name += '-';
        name += std::to_string(profile.l[static_cast<std::size_t>(m)]);
    }
    return dir / (name + ".txt");
}

std::shared_ptr<const CoeffTensor> TensorCache::get(const WeightProfile& profile, int p) {
    std::lock_guard lock(mutex_);
    if (auto it = tensors_.find(profile); it != tensors_.end() && it->second->cap() >= p) return it->second;

    std::shared_ptr<const CoeffTensor> tensor;
    if (options_.store_dir) {
        const auto file = store_file(*options_.store_dir, profile);
        if (fs::exists(file)) {
            const auto header = read_header(file);
            if (header.profile == profile && header.cap >= p)
                tensor = std::make_shared<const CoeffTensor>(load(file, profile, header.cap));
        }
        if (!tensor && options_.offline)
            throw StoreError(StoreErrorKind::InsufficientCap,
                             "coefficients for profile " + profile.str() + " up to p = " + std::to_string(p) +
                                 " are not in " + options_.store_dir->string() +
                                 "; build them with: stochtaylor coeffs build --weights " + profile_field(profile) +
                                 " --p " + std::to_string(p) + " --store " + options_.store_dir->string());
    }
    if (!tensor) {
        tensor = std::make_shared<const CoeffTensor>(build_tensor(profile, p, options_.build));
        if (options_.store_dir && tensor->box_size() <= options_.persist_limit)
            save(*tensor, store_file(*options_.store_dir, profile), true);
    }
    tensors_[profile] = tensor;
    return tensor;
}

TensorCache& default_tensor_cache() {
    static TensorCache cache;
    return cache;
}

}  // namespace stochtaylor
