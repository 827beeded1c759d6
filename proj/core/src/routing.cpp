#include "ivr/routing.hpp"

#include "ivr/errors.hpp"

namespace ivr {

RoutingTable RoutingTable::build(const IntentTaxonomy& taxonomy, std::set<std::string> queues,
                                 std::string operator_queue, std::string origin) {
  RoutingTable t;
  t.queues_.insert(queues.begin(), queues.end());
  t.operator_queue_ = std::move(operator_queue);
  if (t.operator_queue_.empty()) {
    throw ConfigError(origin, "operator_queue", "must be non-empty");
  }
  t.queues_.insert(t.operator_queue_);
  for (const auto& c : taxonomy.classes()) {
    if (!t.queues_.contains(c.queue_id)) {
      throw ConfigError(origin, "classes." + c.class_id + ".queue_id",
                        "class '" + c.class_id + "' routes to undeclared queue '" + c.queue_id +
                            "'");
    }
    t.routes_.emplace(c.class_id, c.queue_id);
  }
  return t;
}

void RoutingTable::set_route(std::string class_id, std::string queue_id) {
  queues_.insert(queue_id);
  routes_[std::move(class_id)] = std::move(queue_id);
}

std::string route(std::string_view class_id, const RoutingTable& routing) {
  auto it = routing.routes().find(class_id);
  if (it == routing.routes().end()) {
    throw UnroutableClassError(std::string(class_id));
  }
  return it->second;
}

}  // namespace ivr
