# Copyright (C) 2024 twyleg
import argparse
import logging
import shlex
import traceback
from argparse import ArgumentParser, Namespace, _SubParsersAction
from typing import Callable, Dict, List, Union

from prompt_toolkit import PromptSession
from prompt_toolkit.completion import NestedCompleter, WordCompleter
from prompt_toolkit.history import InMemoryHistory
from prompt_toolkit.styles import Style

from twisted_sums import TwistedSumsError
from twisted_sums.generic_application import ExitCode, GenericApplication


logm = logging.getLogger(__name__)


class Command:

    class SubcommandNotAvailableError(Exception):
        pass

    CommandDict = Dict[str, Union[None, "CommandDict"]] | None | WordCompleter
    Handler = Callable[[Namespace], int]

    def __init__(self, parser: ArgumentParser, handler: Handler | None = None):
        self.parser = parser
        self.subparser: _SubParsersAction | None = None
        self.subcommands: Dict[str, Command] = {}
        self.handler = handler
        self.parser.set_defaults(handler=handler if handler else self.default_handler)

    def default_handler(self, args: Namespace) -> int:
        self.parser.print_usage()
        return ExitCode.USAGE

    def commands_to_dict(self) -> CommandDict:
        arguments: List[str] = [option for action in self.parser._actions for option in action.option_strings]
        command_dict = {name: subcommand.commands_to_dict() for name, subcommand in self.subcommands.items()}
        merged_dict = command_dict | {argument: None for argument in arguments}
        return merged_dict if len(merged_dict) else None

    def find_subcommand(self, command: str) -> "Command":
        head, _, rest = command.partition(" ")
        if head in self.subcommands:
            return self.subcommands[head].find_subcommand(rest) if rest else self.subcommands[head]
        raise Command.SubcommandNotAvailableError(command)

    def add_subcommand(self, command: str, help: str = "", description: str = "", handler: Handler | None = None) -> "Command":
        head, _, rest = command.partition(" ")

        if rest:
            if head not in self.subcommands:
                self.add_subcommand(head)
            return self.subcommands[head].add_subcommand(rest, help, description, handler)

        if self.subparser is None:
            self.subparser = self.parser.add_subparsers(required=self.handler is None, title="subcommands", dest=f"{self.parser.prog}_command")

        # Handle help manually to avoid automatic exit when not desired (e.g. in shell mode)
        parser = self.subparser.add_parser(head, add_help=False, description=description, help=help)
        # fmt: off
        parser.add_argument(
            "-h",
            "--help",
            help="Show help",
            action=GenericApplication.CustomHelpAction
        )
        # fmt: on

        subcommand = Command(parser, handler)
        self.subcommands[head] = subcommand
        return subcommand


class RootCommand(Command):
    pass


class SubcommandApplication(GenericApplication):
    # fmt: off
    def __init__(self,
                 shell_enabled: bool = True,
                 **kwargs):
        # fmt: on
        super().__init__(**kwargs)
        self.shell_enabled = shell_enabled

        self.root_command = RootCommand(self._arg_parser, self._handle_root_command if self.shell_enabled else None)

    def _handle_root_command(self, args: argparse.Namespace) -> int:
        prompt_style = Style.from_dict(
            {
                "": "#ff1618 bold",
                "prompt": "#1dcf84 italic",
            }
        )
        prompt_fragments = [("class:prompt", f"{self.application_name} $ ")]

        completer = NestedCompleter.from_nested_dict(self.root_command.commands_to_dict())  # type: ignore
        session: PromptSession = PromptSession(history=InMemoryHistory(), completer=completer)

        while True:
            try:
                command_line = session.prompt(prompt_fragments, style=prompt_style)  # type: ignore
            except (KeyboardInterrupt, EOFError):
                logm.info("Exiting...")
                return ExitCode.SUCCESS

            if not command_line.strip():
                continue
            try:
                logm.debug("Entered command: %s", command_line)
                self._args = self._arg_parser.parse_args(shlex.split(command_line))
                ret = self._args.handler(self._args)
                if ret:
                    logm.info("Command returned exit code %d", ret)
            except KeyboardInterrupt:
                logm.info("Command aborted...")
            except (GenericApplication.CustomHelpAction.HelpRequested, GenericApplication.CustomVersionAction.VersionRequested):
                pass
            except (argparse.ArgumentError, SystemExit, ValueError) as e:
                print(f"Invalid command: '{command_line}' ({e})")
            except TwistedSumsError as e:
                logm.error("%s: %s", e.__class__.__name__, e)
                logm.debug(traceback.format_exc())
            except Exception as e:
                logm.error("%s: %s", e.__class__.__name__, e)
                logm.debug(traceback.format_exc())

    def add_subcommand(self, command: str, help: str, description: str, handler: Command.Handler) -> Command:
        return self.root_command.add_subcommand(command, help, description, handler)

    def run(self, args: argparse.Namespace) -> int:
        return args.handler(args)
