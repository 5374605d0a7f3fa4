#pragma once

#include <map>
#include <string>

#include "cw/common.hpp"

namespace cw {

// Catalog ids look like "name?key=value&key=value".
struct IdQuery {
    std::string name;
    std::map<std::string, std::string> params;

    bool has(const std::string& k) const { return params.count(k) != 0; }

    std::string get(const std::string& k, const std::string& fallback = "") const {
        auto it = params.find(k);
        return it == params.end() ? fallback : it->second;
    }

    double get_real(const std::string& k, double fallback) const;
    long get_int(const std::string& k, long fallback) const;
};

IdQuery parse_id(const std::string& id);

}  // namespace cw
