#include "algsim/cwe_catalog.hpp"

namespace algsim {

const std::vector<CweEntry>& cwe_catalog() {
  static const std::vector<CweEntry> kCatalog = {
      {"CWE-20", "Improper Input Validation", "Crafted DNS, RTSP packets",
       {"Cisco ASA", "Cisco FTD"}, true},
      {"CWE-22",
       "Improper Limitation of a Pathname to a Restricted Directory",
       "Crafted HTTP requests",
       {"HAProxy", "Pfsense"},
       false},
      {"CWE-74", "Improper Neutralization of characters ('Injection')",
       "Encapsulation attack (via HTTP req)", {"HAProxy"}, false},
      {"CWE-78",
       "Improper Neutralization of characters ('OS Command Injection')",
       "OS command injection (via HTTP req)",
       {"Haproxy", "Pfsense"},
       false},
      {"CWE-79", "Improper Neutralization of characters ('Cross-site Scripting')",
       "Crafted HTTP requests", {"Pfsense"}, false},
      {"CWE-91", "XML Injection (aka Blind XPath Injection)",
       "Manipulation of configuration XML files", {"Pfsense"}, false},
      {"CWE-120",
       "Buffer Copy without Checking Size of Input ('Buffer Overflow')",
       "Specific FTP transfer",
       {"Cisco IOS"},
       false},
      {"CWE-190", "Integer Overflow or Wraparound", "HTTP Request Smuggling",
       {"HAProxy"}, false},
      {"CWE-200",
       "Exposure of Sensitive Information to an Unauthorized Actor",
       "Log Data Extraction",
       {"HAProxy"},
       false},
      {"CWE-281", "Improper Preservation of Permissions",
       "Crafted FTP commands", {"Pfsense"}, true},
      {"CWE-290", "Authentication Bypass by Spoofing", "IP and MAC spoofing",
       {"PfSense"}, true},
      {"CWE-307",
       "Improper Restriction of Excessive Authentication Attempts",
       "Brute Force to Authentication",
       {"Pfsense"},
       false},
      {"CWE-358", "Improperly Implemented Security Check for Standard",
       "NAT Slipstreaming", {"Cisco ASA", "Cisco FTD"}, false},
      {"CWE-399", "Resource Management Errors", "Crafted SIP, H.323 packets",
       {"Cisco IOS"}, false},
      {"CWE-400", "Uncontrolled Resource Consumption",
       "Resource Exhaustion Attacks", {"F5 BIP-IP AFM"}, true},
      {"CWE-401", "Missing Release of Memory after Effective Lifetime",
       "Crafted SIP packets", {"Junos OS"}, false},
      {"CWE-434", "Unrestricted Upload of Dangerous File",
       "Specific FTP transfer", {"Cisco IOS"}, true},
      {"CWE-444", "Inconsistent Interpretation of HTTP Requests",
       "HTTP Request/Response Smuggling", {"HAProxy"}, true},
      {"CWE-459", "Incomplete Cleanup", "Crafted HTTP requests", {"HAProxy"},
       false},
      {"CWE-665", "Improper Initialization", "Crafted SIP packets",
       {"Cisco IOS"}, false},
      {"CWE-693", "Protection Mechanism Failure", "Crafted H.323 packet",
       {"Cisco IOS"}, false},
      {"CWE-754", "Improper Check for Unusual or Exceptional Conditions",
       "Crafted DNS packets", {"Cisco IOS"}, false},
      {"CWE-755", "Improper Handling of Exceptional Conditions",
       "Crafted HTTP request", {"HAProxy"}, false},
      {"CWE-787", "Out-of-bounds Write", "Crafted HTTP requests",
       {"HAProxy"}, false},
      {"CWE-824", "Access of Uninitialized Pointer", "Crafted SIP packets",
       {"Junos OS"}, false},
      {"CWE-835", "Loop with Unreachable Exit Condition ('Infinite Loop')",
       "Crafted HTTP responses", {"HAProxy"}, false},
      {"CWE-908", "Use of Uninitialized Resource",
       "Resource Exhaustion Attacks", {"F5 BIP-IP AFM"}, false},
      {"CWE-1333", "Inefficient Regular Expression Complexity",
       "Crafted HTTP requests", {}, true},
  };
  return kCatalog;
}

const CweEntry* cwe_lookup(std::string_view id) {
  for (const CweEntry& entry : cwe_catalog()) {
    if (entry.id == id) {
      return &entry;
    }
  }
  return nullptr;
}

}  // namespace algsim
