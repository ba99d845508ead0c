#include "tlscool/trajectory.hpp"

#include <algorithm>

namespace tlscool {

void Trajectory::set_meta(const std::string& key, const std::string& value) {
    auto it = std::find_if(metadata.begin(), metadata.end(), [&](const auto& kv) { return kv.first == key; });
    if (it == metadata.end())
        metadata.emplace_back(key, value);
    else
        it->second = value;
}

const std::string* Trajectory::meta(const std::string& key) const {
    auto it = std::find_if(metadata.begin(), metadata.end(), [&](const auto& kv) { return kv.first == key; });
    return it == metadata.end() ? nullptr : &it->second;
}

}  // namespace tlscool
