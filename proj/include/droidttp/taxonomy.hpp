#ifndef DROIDTTP_TAXONOMY_HPP
#define DROIDTTP_TAXONOMY_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

namespace droidttp {

// MITRE ATT&CK Mobile (Android) taxonomy as used by the classification tasks:
// 11 Tactics (Lateral Movement excluded for lack of samples) and the 48
// Techniques with enough labeled data. The technique -> tactics table is the
// default used when a label file lists techniques without explicit tactics;
// explicit tactics in the label file always take precedence (union).

inline const std::vector<std::string>& tactic_names() {
  static const std::vector<std::string> k = {
      "Collection",        "Command and Control", "Credential Access",
      "Defense Evasion",   "Discovery",           "Execution",
      "Exfiltration",      "Impact",              "Initial Access",
      "Persistence",       "Privilege Escalation"};
  return k;
}

inline const std::vector<std::string>& technique_ids() {
  static const std::vector<std::string> k = {
      "T1398", "T1404", "T1406", "T1407", "T1409", "T1414", "T1417", "T1418",
      "T1420", "T1421", "T1422", "T1424", "T1426", "T1429", "T1430", "T1437",
      "T1471", "T1481", "T1509", "T1512", "T1513", "T1516", "T1517", "T1521",
      "T1532", "T1533", "T1541", "T1544", "T1575", "T1577", "T1582", "T1604",
      "T1616", "T1617", "T1623", "T1624", "T1630", "T1633", "T1636", "T1637",
      "T1640", "T1642", "T1643", "T1644", "T1645", "T1646", "T1655", "T1662"};
  return k;
}

inline const std::map<std::string, std::vector<std::string>>& technique_to_tactics() {
  static const std::map<std::string, std::vector<std::string>> k = {
      {"T1398", {"Persistence", "Privilege Escalation"}},
      {"T1404", {"Privilege Escalation"}},
      {"T1406", {"Defense Evasion"}},
      {"T1407", {"Defense Evasion"}},
      {"T1409", {"Collection", "Credential Access"}},
      {"T1414", {"Collection", "Credential Access"}},
      {"T1417", {"Collection", "Credential Access"}},
      {"T1418", {"Discovery"}},
      {"T1420", {"Discovery"}},
      {"T1421", {"Discovery"}},
      {"T1422", {"Discovery"}},
      {"T1424", {"Discovery"}},
      {"T1426", {"Discovery"}},
      {"T1429", {"Collection"}},
      {"T1430", {"Collection", "Discovery"}},
      {"T1437", {"Command and Control"}},
      {"T1471", {"Impact"}},
      {"T1481", {"Command and Control"}},
      {"T1509", {"Command and Control"}},
      {"T1512", {"Collection"}},
      {"T1513", {"Collection"}},
      {"T1516", {"Defense Evasion", "Impact"}},
      {"T1517", {"Collection", "Credential Access"}},
      {"T1521", {"Command and Control"}},
      {"T1532", {"Collection"}},
      {"T1533", {"Collection"}},
      {"T1541", {"Persistence"}},
      {"T1544", {"Command and Control"}},
      {"T1575", {"Execution"}},
      {"T1577", {"Persistence"}},
      {"T1582", {"Collection", "Impact"}},
      {"T1604", {"Command and Control"}},
      {"T1616", {"Collection", "Command and Control", "Impact"}},
      {"T1617", {"Collection", "Credential Access"}},
      {"T1623", {"Execution"}},
      {"T1624", {"Persistence"}},
      {"T1630", {"Defense Evasion"}},
      {"T1633", {"Defense Evasion", "Discovery"}},
      {"T1636", {"Collection"}},
      {"T1637", {"Command and Control"}},
      {"T1640", {"Impact"}},
      {"T1642", {"Impact"}},
      {"T1643", {"Impact"}},
      {"T1644", {"Command and Control"}},
      {"T1645", {"Persistence"}},
      {"T1646", {"Exfiltration"}},
      {"T1655", {"Defense Evasion"}},
      {"T1662", {"Impact"}}};
  return k;
}

}  // namespace droidttp

#endif  // DROIDTTP_TAXONOMY_HPP
