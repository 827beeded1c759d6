#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "ivr/taxonomy.hpp"

namespace ivr {

/// class_id -> queue_id, restricted to a declared set of queues.
class RoutingTable {
 public:
  RoutingTable() = default;

  /// Binds every taxonomy class to its queue_id. Throws ConfigError naming the
  /// first class whose queue is not in `queues`, or if the operator queue is
  /// not declared.
  static RoutingTable build(const IntentTaxonomy& taxonomy, std::set<std::string> queues,
                            std::string operator_queue, std::string origin = "");

  const std::map<std::string, std::string, std::less<>>& routes() const noexcept { return routes_; }
  const std::set<std::string, std::less<>>& queues() const noexcept { return queues_; }
  const std::string& operator_queue() const noexcept { return operator_queue_; }
  bool has_queue(std::string_view q) const { return queues_.contains(q); }

  /// Adds or replaces a single route (tests and tools).
  void set_route(std::string class_id, std::string queue_id);

 private:
  std::map<std::string, std::string, std::less<>> routes_;
  std::set<std::string, std::less<>> queues_;
  std::string operator_queue_;
};

/// Throws UnroutableClassError if class_id has no route.
std::string route(std::string_view class_id, const RoutingTable& routing);

}  // namespace ivr
