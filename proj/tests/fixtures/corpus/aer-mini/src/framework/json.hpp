#ifndef _aer_framework_json_hpp_
#define _aer_framework_json_hpp_

#include <map>
#include <string>

namespace AER {

// Minimal key/value stand-in for the JSON layer.
using json_t = std::map<std::string, std::string>;

inline bool check_key(const std::string &key, const json_t &js) {
  return js.find(key) != js.end();
}

}  // namespace AER

#endif
