#include "stochtaylor/coeff_store.hpp"
#include "stochtaylor/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace stochtaylor;
namespace fs = std::filesystem;

namespace {

class StoreTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("stochtaylor_store_test_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_sample(const WeightProfile& profile, int cap) {
        const fs::path file = store_file(dir_, profile);
        save(build_tensor(profile, cap), file);
        return file;
    }

    static std::string slurp(const fs::path& file) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static void spit(const fs::path& file, const std::string& text) {
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        out << text;
    }

    static StoreErrorKind load_error(const fs::path& file, const WeightProfile& profile, int p) {
        try {
            load(file, profile, p);
        } catch (const StoreError& e) {
            return e.kind();
        }
        ADD_FAILURE() << "load succeeded unexpectedly";
        return StoreErrorKind::Io;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(StoreTest, RoundTripPreservesEveryValue) {
    for (const char* text : {"0", "00", "001", "0100"}) {
        const WeightProfile profile = WeightProfile::parse(text);
        const int cap = profile.k() <= 2 ? 8 : 3;
        const CoeffTensor t = build_tensor(profile, cap);
        const fs::path file = store_file(dir_, profile);
        EXPECT_EQ(save(t, file), t.box_size());
        EXPECT_EQ(load(file, profile, cap), t);
        EXPECT_EQ(load(file, profile, 1), t.restrict_to(1));
        const StoreHeader h = read_header(file);
        EXPECT_EQ(h.version, kStoreVersion);
        EXPECT_EQ(h.profile, profile);
        EXPECT_EQ(h.cap, cap);
    }
}

TEST_F(StoreTest, RefusesToOverwriteWithoutForce) {
    const WeightProfile profile = WeightProfile::zeros(2);
    const fs::path file = write_sample(profile, 3);
    try {
        save(build_tensor(profile, 4), file);
        FAIL() << "overwrite was allowed";
    } catch (const StoreError& e) {
        EXPECT_EQ(e.kind(), StoreErrorKind::Exists);
    }
    EXPECT_EQ(read_header(file).cap, 3);
    save(build_tensor(profile, 4), file, true);
    EXPECT_EQ(read_header(file).cap, 4);
}

TEST_F(StoreTest, DetectsMissingRecords) {
    const WeightProfile profile = WeightProfile::zeros(2);
    const fs::path file = write_sample(profile, 3);
    std::string text = slurp(file);
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    spit(file, text);
    EXPECT_EQ(load_error(file, profile, 3), StoreErrorKind::Truncated);
}

TEST_F(StoreTest, DetectsCutLastRecord) {
    const WeightProfile profile = WeightProfile::zeros(2);
    const fs::path file = write_sample(profile, 3);
    std::string text = slurp(file);
    text.resize(text.size() - 3);
    spit(file, text);
    EXPECT_EQ(load_error(file, profile, 3), StoreErrorKind::Truncated);
}

TEST_F(StoreTest, DetectsChecksumMismatch) {
    const WeightProfile profile = WeightProfile::zeros(2);
    const fs::path file = write_sample(profile, 3);
    std::string text = slurp(file);
    const auto pos = text.find("| ", text.find('\n'));
    ASSERT_NE(pos, std::string::npos);
    text.insert(pos + 2, "-");
    spit(file, text);
    EXPECT_EQ(load_error(file, profile, 3), StoreErrorKind::Checksum);
}

TEST_F(StoreTest, DetectsForeignFileAndVersion) {
    const WeightProfile profile = WeightProfile::zeros(2);
    const fs::path file = write_sample(profile, 2);
    const std::string text = slurp(file);

    spit(file, "NOTCOEFF" + text.substr(std::string(kStoreMagic).size()));
    EXPECT_EQ(load_error(file, profile, 2), StoreErrorKind::Malformed);

    std::string bumped = text;
    bumped.replace(bumped.find(" v1 "), 4, " v9 ");
    spit(file, bumped);
    EXPECT_EQ(load_error(file, profile, 2), StoreErrorKind::VersionMismatch);

    spit(file, "");
    EXPECT_EQ(load_error(file, profile, 2), StoreErrorKind::Truncated);
}

TEST_F(StoreTest, DetectsWrongProfileAndInsufficientCap) {
    const WeightProfile profile = WeightProfile::zeros(2);
    const fs::path file = write_sample(profile, 2);
    EXPECT_EQ(load_error(file, WeightProfile::parse("01"), 2), StoreErrorKind::ProfileMismatch);
    EXPECT_EQ(load_error(file, profile, 3), StoreErrorKind::InsufficientCap);
}

TEST_F(StoreTest, MissingFileIsIoError) {
    EXPECT_EQ(load_error(dir_ / "absent.txt", WeightProfile::zeros(1), 0), StoreErrorKind::Io);
}

TEST_F(StoreTest, CachePersistsAndServesOffline) {
    const WeightProfile profile = WeightProfile::parse("001");
    TensorCache::Options online;
    online.store_dir = dir_;
    TensorCache first(online);
    const auto t = first.get(profile, 4);
    EXPECT_GE(t->cap(), 4);
    EXPECT_TRUE(fs::exists(store_file(dir_, profile)));

    TensorCache::Options offline = online;
    offline.offline = true;
    TensorCache second(offline);
    EXPECT_EQ(second.get(profile, 3)->restrict_to(3), t->restrict_to(3));
}

TEST_F(StoreTest, OfflineMissTellsHowToBuild) {
    TensorCache::Options offline;
    offline.store_dir = dir_;
    offline.offline = true;
    TensorCache cache(offline);
    try {
        cache.get(WeightProfile::zeros(3), 5);
        FAIL() << "offline miss did not raise";
    } catch (const StoreError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("coeffs build"), std::string::npos) << what;
        EXPECT_NE(what.find("--p 5"), std::string::npos) << what;
    }
}

TEST_F(StoreTest, CacheReusesLargerTensor) {
    TensorCache cache;
    const auto big = cache.get(WeightProfile::zeros(2), 10);
    const auto small = cache.get(WeightProfile::zeros(2), 4);
    EXPECT_EQ(big.get(), small.get());
}
