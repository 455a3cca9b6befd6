"""lexkit: legal-intelligence workbench.

Subpackages: gateway (chat-completion client with record/replay), kb
(versioned statute store + Top-K retrieval), rag (prompt assembly and the
consult pipeline), forge (instruction dataset construction), mcq (objective
MCQ benchmark harness), judge (subjective rubric evaluation), service (HTTP
facade), cli (command line).
"""

__version__ = "0.1.0"
