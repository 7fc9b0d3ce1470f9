/** Keyboard and gamepad mapping to per-DOF rate fractions.
 *
 * Bindings mirror gamepad axes so the tool works without hardware; every
 * emitted fraction is clamped to [-1, 1]. One control message per
 * animation frame; all-zero messages mean "hold".
 */
import { clampControl, ControlFractions, DofName, zeroControl } from "./protocol.js";

export interface KeyBinding {
  dof: DofName;
  sign: 1 | -1;
}

/** Default keys: arrows swing/luff, w/s hoist, i/k/j/l travel, u/o heading. */
export const DEFAULT_KEY_BINDINGS: Record<string, KeyBinding> = {
  ArrowRight: { dof: "swing", sign: -1 },
  ArrowLeft: { dof: "swing", sign: 1 },
  ArrowUp: { dof: "luff", sign: 1 },
  ArrowDown: { dof: "luff", sign: -1 },
  w: { dof: "hoist", sign: -1 }, // line in: hook rises
  s: { dof: "hoist", sign: 1 },
  i: { dof: "tx", sign: 1 },
  k: { dof: "tx", sign: -1 },
  j: { dof: "ty", sign: 1 },
  l: { dof: "ty", sign: -1 },
  u: { dof: "heading", sign: 1 },
  o: { dof: "heading", sign: -1 },
};

export interface AxisBinding {
  axis: number;
  dof: DofName;
  scale: 1 | -1;
}

/** Left stick swing/luff, right stick heading/hoist. */
export const DEFAULT_AXIS_BINDINGS: AxisBinding[] = [
  { axis: 0, dof: "swing", scale: -1 },
  { axis: 1, dof: "luff", scale: -1 },
  { axis: 2, dof: "heading", scale: -1 },
  { axis: 3, dof: "hoist", scale: 1 },
];

export const GAMEPAD_DEADZONE = 0.08;

export function controlFromKeys(
  pressed: ReadonlySet<string>,
  bindings: Record<string, KeyBinding> = DEFAULT_KEY_BINDINGS
): ControlFractions {
  const control = zeroControl();
  for (const key of pressed) {
    const binding = bindings[key];
    if (binding) {
      control[binding.dof] += binding.sign;
    }
  }
  return clampControl(control);
}

export function controlFromGamepad(
  axes: ReadonlyArray<number>,
  bindings: AxisBinding[] = DEFAULT_AXIS_BINDINGS,
  deadzone: number = GAMEPAD_DEADZONE
): ControlFractions {
  const control = zeroControl();
  for (const binding of bindings) {
    const raw = axes[binding.axis] ?? 0;
    if (Math.abs(raw) > deadzone) {
      control[binding.dof] += binding.scale * raw;
    }
  }
  return clampControl(control);
}

export function mergeControls(a: ControlFractions, b: ControlFractions): ControlFractions {
  const out = zeroControl();
  for (const dof of Object.keys(out) as DofName[]) {
    out[dof] = a[dof] + b[dof];
  }
  return clampControl(out);
}

/** Browser loop: tracks key state and emits one control per animation frame. */
export class InputLoop {
  private pressed = new Set<string>();
  private running = false;

  constructor(
    private emit: (control: ControlFractions) => void,
    private keyBindings: Record<string, KeyBinding> = DEFAULT_KEY_BINDINGS
  ) {}

  readonly onKeyDown = (ev: KeyboardEvent): void => {
    const key = ev.key.length === 1 ? ev.key.toLowerCase() : ev.key;
    if (this.keyBindings[key]) {
      ev.preventDefault();
      this.pressed.add(key);
    }
  };

  readonly onKeyUp = (ev: KeyboardEvent): void => {
    const key = ev.key.length === 1 ? ev.key.toLowerCase() : ev.key;
    this.pressed.delete(key);
  };

  start(target: {
    addEventListener(type: string, cb: any): void;
  }): void {
    target.addEventListener("keydown", this.onKeyDown);
    target.addEventListener("keyup", this.onKeyUp);
    this.running = true;
    const tick = () => {
      if (!this.running) {
        return;
      }
      let control = controlFromKeys(this.pressed, this.keyBindings);
      const pads = (globalThis.navigator as any)?.getGamepads?.() ?? [];
      for (const pad of pads) {
        if (pad) {
          control = mergeControls(control, controlFromGamepad(pad.axes));
        }
      }
      this.emit(control);
      (globalThis as any).requestAnimationFrame?.(tick);
    };
    (globalThis as any).requestAnimationFrame?.(tick);
  }

  stop(): void {
    this.running = false;
  }
}
