#include "fbmatch/tensor.hpp"

#include <algorithm>

namespace fbmatch {

std::vector<int> ObjectMask::object_ids() const {
    std::vector<int> ids;
    for (std::uint16_t v : labels)
        if (v != 0) ids.push_back(v);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

PixelPartition partition_pixels(const ObjectMask& mask, int object_id) {
    PixelPartition part;
    part.object_id = object_id;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(y, x) == object_id)
                part.fg.push_back({x, y});
            else
                part.bg.push_back({x, y});
        }
    }
    return part;
}

}  // namespace fbmatch
