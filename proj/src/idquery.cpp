#include "cw/idquery.hpp"

#include <cstdlib>

namespace cw {

IdQuery parse_id(const std::string& id) {
    IdQuery q;
    auto qm = id.find('?');
    q.name = id.substr(0, qm);
    if (qm == std::string::npos) return q;
    std::string rest = id.substr(qm + 1);
    size_t pos = 0;
    while (pos < rest.size()) {
        size_t amp = rest.find('&', pos);
        std::string kv = rest.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError("malformed id parameter '" + kv + "' in '" + id + "'");
        q.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        if (amp == std::string::npos) break;
        pos = amp + 1;
    }
    return q;
}

double IdQuery::get_real(const std::string& k, double fallback) const {
    auto it = params.find(k);
    if (it == params.end()) return fallback;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw ValidationError("parameter '" + k + "' is not a real number: '" + it->second + "'");
    return v;
}

long IdQuery::get_int(const std::string& k, long fallback) const {
    auto it = params.find(k);
    if (it == params.end()) return fallback;
    char* end = nullptr;
    long v = std::strtol(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        throw ValidationError("parameter '" + k + "' is not an integer: '" + it->second + "'");
    return v;
}

}  // namespace cw
