// Trailing-edge debouncer for the threshold text input (300 ms by default).

export class Debouncer {
	private handle: ReturnType<typeof setTimeout> | undefined;

	constructor(private readonly delayMs = 300) {}

	run(op: () => void): void {
		if (this.handle !== undefined) clearTimeout(this.handle);
		this.handle = setTimeout(() => {
			this.handle = undefined;
			op();
		}, this.delayMs);
	}

	cancel(): void {
		if (this.handle !== undefined) clearTimeout(this.handle);
		this.handle = undefined;
	}
}
