#ifndef PCE_STANDARD_GAMES_H_
#define PCE_STANDARD_GAMES_H_

#include "pce/extensive_game.h"
#include "pce/rational.h"
#include "pce/signaling_game.h"
#include "pce/strategic_game.h"

namespace pce {

// Critic and diner choose R (restaurant) or Z (pizza); the restaurant picks
// H or L ingredients. Customers get y (H) or x (L) from eating out, the
// critic gets +1 for a review, and both lose 0.5 when both go. The
// restaurant earns +1 (H) or +2 (L) per customer and +/-2.5 from the
// critic's review.
StrategicGame RestaurantGame(const Rational& x = Rational(-2), const Rational& y = Rational(1));

// Four-player link formation. Players N1, N2, S1, S2 choose Active or
// Inactive; an Active player links to every Active player on the other
// side, paying her cost and receiving the partner's quality per link.
enum class LinkVersion { kAntiMonotonic, kCoMonotonic };
StrategicGame LinkGame(LinkVersion version);

// Beer-quiche with prior 0.9 on the strong type. The sender gets +1 for her
// preferred breakfast (strong: beer, weak: quiche) and +2 when not dueled;
// the receiver gets +1 for dueling the weak type or sparing the strong one.
SignalingGame BeerQuiche();

// Tree forms. The restaurant and link trees are simultaneous-move trees of
// the strategic games; beer-quiche uses SignalingTree.
ExtensiveGame RestaurantTree(const Rational& x = Rational(-2), const Rational& y = Rational(1));
ExtensiveGame LinkTree(LinkVersion version);
ExtensiveGame BeerQuicheTree();

// Learning environment for the restaurant tree: each customer goes with
// probability 1/2 and the restaurant plays H with probability 2/3.
MixedProfile RestaurantEnvironment();

// Three-player centipede: P1 drops or passes to P2, who drops or passes to
// P3, who drops or passes. Payoffs are generic (pairwise distinct for each
// player) and otherwise arbitrary.
ExtensiveGame CentipedeTree();

// Selten's horse: P1 plays Down (to P3) or Across (to P2); P2 plays Down (to
// P3) or Across (end); P3 cannot tell which of the two moved Down and plays
// Left or Right. Generic payoffs.
ExtensiveGame SeltensHorseTree();

}  // namespace pce

#endif  // PCE_STANDARD_GAMES_H_
