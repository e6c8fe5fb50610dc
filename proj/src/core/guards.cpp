#include <cstdlib>
#include <sstream>

#include "creature_lab/errors.hpp"

namespace creature_lab {

namespace {

std::size_t parse_count(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("malformed guard value \"" + text + "\"");
    }
    return static_cast<std::size_t>(std::stoull(text));
}

}  // namespace

Guards Guards::parse(const std::string& text) { return parse(text, Guards{}); }

Guards Guards::parse(const std::string& text, Guards base) {
    if (text.find('=') == std::string::npos) {
        const std::size_t all = parse_count(text);
        return Guards{all, all, all, all, all};
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("malformed guard entry \"" + item + "\"");
        const std::string key = item.substr(0, eq);
        const std::size_t value = parse_count(item.substr(eq + 1));
        if (key == "pos") base.max_pos = value;
        else if (key == "sigma") base.max_sigma = value;
        else if (key == "rows") base.max_rows = value;
        else if (key == "search") base.max_search = value;
        else if (key == "nodes") base.max_nodes = value;
        else throw InputError("unknown guard \"" + key + "\"");
    }
    return base;
}

Guards Guards::from_environment() {
    const char* env = std::getenv("CREATURE_LAB_GUARD");
    if (env == nullptr || *env == '\0') return Guards{};
    return parse(env);
}

}  // namespace creature_lab
