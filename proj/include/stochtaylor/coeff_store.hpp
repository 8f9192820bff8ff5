#pragma once

#include "stochtaylor/coeff_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace stochtaylor {

/**
 * @brief Text file holding every record of a coefficient box.
 *
 * Layout:
 *   FLCOEFF v1 <l1,...,lk> <p> <crc32 of the body, 8 hex digits>
 *   k l1 .. lk | j1 .. jk | num/den        (one line per multi-index, lexicographic order)
 */
inline constexpr const char* kStoreMagic = "FLCOEFF";
inline constexpr const char* kStoreVersion = "v1";

/** Writes the full box atomically. Throws StoreError(Exists) unless force is set. */
std::uint64_t save(const CoeffTensor& tensor, const std::filesystem::path& path, bool force = false);

/** Loads the sub-box {0..p}^k; each failure mode raises a StoreError of its own kind. */
CoeffTensor load(const std::filesystem::path& path, const WeightProfile& profile, int p);

struct StoreHeader {
    std::string version;
    WeightProfile profile;
    int cap = 0;
    std::uint32_t checksum = 0;
};

StoreHeader read_header(const std::filesystem::path& path);

/** $STOCHTAYLOR_STORE, else $XDG_CACHE_HOME/stochtaylor, else ~/.cache/stochtaylor. */
std::filesystem::path default_store_dir();

/** Canonical file name of a profile inside a store directory. */
std::filesystem::path store_file(const std::filesystem::path& dir, const WeightProfile& profile);

/**
 * @brief Shared in-memory tensors, optionally backed by a store directory.
 *
 * get() returns a tensor whose cap is at least the requested one. With a store directory,
 * tensors found on disk are loaded instead of rebuilt, and freshly built tensors of at most
 * persist_limit records are written back. In offline mode a missing tensor is an error
 * carrying the command that builds it.
 */
class TensorCache {
public:
    struct Options {
        std::optional<std::filesystem::path> store_dir;
        bool offline = false;
        std::uint64_t persist_limit = 2'000'000;
        BuildOptions build;
    };

    TensorCache() = default;
    explicit TensorCache(Options options) : options_(std::move(options)) {}

    std::shared_ptr<const CoeffTensor> get(const WeightProfile& profile, int p);
    const Options& options() const { return options_; }

private:
    Options options_;
    std::mutex mutex_;
    std::map<WeightProfile, std::shared_ptr<const CoeffTensor>> tensors_;
};

/** Process-wide in-memory cache used when no cache is passed explicitly. */
TensorCache& default_tensor_cache();

}  // namespace stochtaylor
