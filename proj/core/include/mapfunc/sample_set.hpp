#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace mapfunc {

//---------------------------------------------------------------------------//
/*!
 * \brief Tagged collection of i.i.d. finite draws.
 *
 * The sorted view is built once on the first order-statistics query and is
 * shared between copies.
 */
class SampleSet {
  public:
    SampleSet() = default;
    explicit SampleSet(std::vector<double> values, std::string label = {}, std::string model_hash = {},
              std::uint64_t master_seed = 0);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t count() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const std::string& label() const noexcept { return label_; }
    const std::string& model_hash() const noexcept { return model_hash_; }
    std::uint64_t master_seed() const noexcept { return master_seed_; }

    //! Ascending copy of the values, cached.
    std::span<const double> sorted() const;

    void write_csv(const std::filesystem::path& path) const;
    //! Binary "MFS1" file plus a JSON sidecar at path + ".json".
    void write_binary(const std::filesystem::path& path) const;
    static SampleSet read_csv(const std::filesystem::path& path);
    static SampleSet read_binary(const std::filesystem::path& path);
    //! Dispatch on the file magic.
    static SampleSet read(const std::filesystem::path& path);

  private:
    struct SortedCache {
        std::once_flag once;
        std::vector<double> data;
    };

    std::vector<double> values_;
    std::string label_;
    std::string model_hash_;
    std::uint64_t master_seed_ = 0;
    std::shared_ptr<SortedCache> cache_ = std::make_shared<SortedCache>();
};

}  // namespace mapfunc
