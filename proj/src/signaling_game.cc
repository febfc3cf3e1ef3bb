#include "pce/signaling_game.h"

#include <stdexcept>

namespace pce {

void SignalingGame::Validate() const {
  if (types.empty() || signals.empty() || actions.empty()) {
    throw std::invalid_argument("signaling game needs types, signals and actions");
  }
  if (prior.size() != types.size()) throw std::invalid_argument("prior length differs from types");
  Rational total = 0;
  for (const auto& p : prior) {
    if (p <= 0) throw std::invalid_argument("prior must be totally mixed");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("prior sums to " + ToString(total));
  for (const auto* table : {&sender_payoff, &receiver_payoff}) {
    if (table->size() != types.size()) throw std::invalid_argument("payoff table type mismatch");
    for (const auto& by_signal : *table) {
      if (by_signal.size() != signals.size()) {
        throw std::invalid_argument("payoff table signal mismatch");
      }
      for (const auto& by_action : by_signal) {
        if (by_action.size() != actions.size()) {
          throw std::invalid_argument("payoff table action mismatch");
        }
      }
    }
  }
}

int NumPlans(const SignalingGame& sg) {
  int n = 1;
  for (int s = 0; s < sg.num_signals(); ++s) n *= sg.num_actions();
  return n;
}

std::vector<int> DecodePlan(const SignalingGame& sg, int plan) {
  std::vector<int> actions(sg.num_signals());
  for (int s = sg.num_signals() - 1; s >= 0; --s) {
    actions[s] = plan % sg.num_actions();
    plan /= sg.num_actions();
  }
  return actions;
}

int EncodePlan(const SignalingGame& sg, const std::vector<int>& actions_by_signal) {
  int plan = 0;
  for (int a : actions_by_signal) plan = plan * sg.num_actions() + a;
  return plan;
}

std::string PlanLabel(const SignalingGame& sg, int plan) {
  std::string label;
  const auto actions = DecodePlan(sg, plan);
  for (int s = 0; s < sg.num_signals(); ++s) {
    if (s > 0) label += ",";
    label += sg.signals[s] + ":" + sg.actions[actions[s]];
  }
  return label;
}

StrategicGame SignalingToStrategic(const SignalingGame& sg) {
  sg.Validate();
  const int n_types = sg.num_types();
  std::vector<std::string> players = sg.types;
  players.push_back(sg.receiver_name);
  std::vector<std::vector<std::string>> strategies(n_types, sg.signals);
  std::vector<std::string> plans;
  for (int plan = 0; plan < NumPlans(sg); ++plan) plans.push_back(PlanLabel(sg, plan));
  strategies.push_back(plans);

  int num_profiles = NumPlans(sg);
  for (int t = 0; t < n_types; ++t) num_profiles *= sg.num_signals();
  std::vector<RationalVector> payoffs(num_profiles, RationalVector(n_types + 1));
  for (int profile = 0; profile < num_profiles; ++profile) {
    // Receiver is the last (least significant) player.
    const int plan = profile % NumPlans(sg);
    int rest = profile / NumPlans(sg);
    std::vector<int> sent(n_types);
    for (int t = n_types - 1; t >= 0; --t) {
      sent[t] = rest % sg.num_signals();
      rest /= sg.num_signals();
    }
    const auto response = DecodePlan(sg, plan);
    Rational receiver = 0;
    for (int t = 0; t < n_types; ++t) {
      const int a = response[sent[t]];
      payoffs[profile][t] = sg.sender_payoff[t][sent[t]][a];
      receiver += sg.prior[t] * sg.receiver_payoff[t][sent[t]][a];
    }
    payoffs[profile][n_types] = receiver;
  }
  return StrategicGame(std::move(players), std::move(strategies), std::move(payoffs));
}

}  // namespace pce
