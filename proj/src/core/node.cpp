#include "creature_lab/node.hpp"

#include "creature_lab/errors.hpp"

namespace creature_lab {

std::string to_string(const Node& node) {
    std::string out = "<";
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (i > 0) out += '.';
        out += std::to_string(node[i]);
    }
    out += '>';
    return out;
}

Node parse_node(const std::string& text) {
    if (text.size() < 2 || text.front() != '<' || text.back() != '>') throw InputError("bad node '" + text + "'");
    Node out;
    const std::string body = text.substr(1, text.size() - 2);
    std::size_t start = 0;
    while (start < body.size()) {
        std::size_t end = body.find('.', start);
        if (end == std::string::npos) end = body.size();
        const std::string part = body.substr(start, end - start);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 19) {
            throw InputError("bad node '" + text + "'");
        }
        out.push_back(std::stoull(part));
        start = end + 1;
        if (end + 1 == body.size()) throw InputError("bad node '" + text + "'");
    }
    return out;
}

std::vector<std::pair<unsigned, unsigned>> PartialMap::pairs() const {
    std::vector<std::pair<unsigned, unsigned>> out;
    for (unsigned i = 0; i < 64; ++i) {
        if (defines(i)) out.emplace_back(i, value(i) ? 1U : 0U);
    }
    return out;
}

}  // namespace creature_lab
