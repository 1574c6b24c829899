"""m2v: turn step-by-step software manuals into recorded GUI walkthrough videos.

The pipeline has four stages, each exposed as a CLI subcommand:

1. ``extract``  - parse a Markdown/HTML manual into an ordered action list
2. ``compile``  - enrich the action list into an executable keyword script
3. ``run``      - execute the script against a simulated GUI and record frames
4. ``convert``  - all of the above in one invocation
"""

__version__ = "0.1.0"
