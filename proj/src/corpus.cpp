#include "koszulkit/dsl.hpp"

namespace kk {

namespace corpus {
extern const std::map<std::string, std::string> files;
}

std::vector<std::string> example_ids() {
    std::vector<std::string> ids;
    for (auto& [id, text] : corpus::files) ids.push_back(id);
    return ids;
}

std::string example_text(const std::string& id) {
    auto it = corpus::files.find(id);
    if (it == corpus::files.end()) throw std::out_of_range("unknown example '" + id + "'");
    return it->second;
}

SpecDoc load_example(const std::string& id, const std::map<std::string, long>& params) {
    return parse(example_text(id), params);
}

}  // namespace kk
